#include "pwlab/weight.hpp"

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <climits>

namespace pwlab {

double WeightField::eval(std::span<const double> x) const {
    double w = intersection_volume(domain, x) / normalizer;
    return std::clamp(w, 0.0, 1.0);
}

WeightField WeightField::scaled(double s) const {
    WeightField f = *this;
    f.domain = domain.scaled(s);
    f.normalizer = normalizer * std::pow(s, domain.dim);
    for (double& v : f.argmax) v *= s;
    return f;
}

double default_base(const ConvexDomain& d) {
    return (d.kind == DomainKind::Disc2D || d.kind == DomainKind::SmoothCurve2D) ? 8.0 : 2.0;
}

namespace {

struct NmData {
    const ConvexDomain* d;
};

double neg_volume(const gsl_vector* v, void* p) {
    const auto* d = static_cast<NmData*>(p)->d;
    std::vector<double> x(v->size);
    for (std::size_t i = 0; i < v->size; ++i) x[i] = gsl_vector_get(v, i);
    return -intersection_volume(*d, x);
}

std::vector<double> nelder_mead(const ConvexDomain& d, std::vector<double> start, double step) {
    const std::size_t n = start.size();
    NmData data{&d};
    gsl_multimin_function F{&neg_volume, n, &data};
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* ss = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, start[i]);
    gsl_vector_set_all(ss, step);
    gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(m, &F, x, ss);
    for (int it = 0; it < 400; ++it) {
        if (gsl_multimin_fminimizer_iterate(m)) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-10 * step) == GSL_SUCCESS) break;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = gsl_vector_get(m->x, i);
    gsl_multimin_fminimizer_free(m);
    gsl_vector_free(x);
    gsl_vector_free(ss);
    return out;
}

// Compass search polish around the best Nelder-Mead point.
std::vector<double> grid_refine(const ConvexDomain& d, std::vector<double> x, double h) {
    const int n = d.dim;
    double best = intersection_volume(d, x);
    while (h > 1e-12 * d.diameter()) {
        bool improved = false;
        for (int i = 0; i < n; ++i)
            for (double sgn : {-1.0, 1.0}) {
                auto y = x;
                y[i] += sgn * h;
                double v = intersection_volume(d, y);
                if (v > best) { best = v; x = y; improved = true; }
            }
        if (!improved) h *= 0.5;
    }
    return x;
}

}  // namespace

WeightField normalize(const ConvexDomain& d, std::uint64_t seed) { return normalize(d, default_base(d), seed); }

WeightField normalize(const ConvexDomain& d, double base, std::uint64_t seed) {
    if (!(d.volume() > 0)) throw std::invalid_argument("zero-volume domain");
    if (!(base > 1)) throw std::invalid_argument("level-set base must exceed 1");
    WeightField f;
    f.domain = d;
    f.base = base;
    Rng g(seed);
    if (d.centrally_symmetric()) {
        auto c = d.symmetry_center();
        for (double& v : c) v *= 2;
        double best = intersection_volume(d, c);
        bool ok = true;
        ConvexDomain two = d.scaled(2);
        for (int k = 0; k < 1000 && ok; ++k) {
            auto x = sample_inside(two, g);
            ok = intersection_volume(d, x) <= best * (1 + 1e-12);
        }
        if (ok) {
            f.normalizer = best;
            f.argmax = c;
            return f;
        }
    }
    std::vector<double> best_x;
    double best = -1;
    const double step = 0.1 * d.diameter();
    for (int s = 0; s < 16; ++s) {
        auto y1 = sample_inside(d, g), y2 = sample_inside(d, g);
        for (int i = 0; i < d.dim; ++i) y1[i] += y2[i];
        auto x = nelder_mead(d, y1, step);
        double v = intersection_volume(d, x);
        if (v > best) { best = v; best_x = x; }
    }
    best_x = grid_refine(d, best_x, 0.01 * d.diameter());
    f.argmax = best_x;
    f.normalizer = intersection_volume(d, best_x);
    return f;
}

int level_index(double w, double a) {
    if (!(w > 0)) return INT_MAX;
    if (w >= 1) return 0;
    return static_cast<int>(std::floor(-std::log(w) / std::log(a)));
}

namespace {

// Star-shaped view of a convex domain about an interior point.
struct RadialView {
    const ConvexDomain* d;
    std::vector<double> c;

    explicit RadialView(const ConvexDomain& dom) : d(&dom) {
        if (dom.centrally_symmetric()) c = dom.symmetry_center();
        else if (dom.kind == DomainKind::Polygon2D) {
            Vec2 m = centroid(dom.vertices);
            c = {m[0] * dom.scale, m[1] * dom.scale};
        } else if (dom.kind == DomainKind::SmoothCurve2D && contains(dom, Vec2{0, 0})) c = {0, 0};
        else {
            auto lo = dom.bbox_lo(), hi = dom.bbox_hi();
            c.resize(dom.dim);
            for (int i = 0; i < dom.dim; ++i) c[i] = 0.5 * (lo[i] + hi[i]);
        }
        if (!contains(dom, c)) throw std::runtime_error("no interior center for radial sampling");
    }

    // Distance from c to the boundary along unit direction u.
    double extent(const std::vector<double>& u) const {
        const double s = d->scale;
        switch (d->kind) {
            case DomainKind::BoxN: {
                double r = 1e300;
                for (int i = 0; i < d->dim; ++i)
                    if (u[i] != 0) r = std::min(r, (d->half_widths[i] * s - (u[i] > 0 ? c[i] : -c[i])) / std::abs(u[i]));
                return r;
            }
            case DomainKind::Polygon2D: {
                const auto& v = d->vertices;
                double r = 1e300;
                Vec2 cc{c[0], c[1]}, uu{u[0], u[1]};
                for (std::size_t k = 0; k < v.size(); ++k) {
                    Vec2 a = s * v[k], b = s * v[(k + 1) % v.size()];
                    Vec2 nrm{b[1] - a[1], a[0] - b[0]};  // outward for ccw
                    double den = dot(nrm, uu);
                    if (den > 0) r = std::min(r, dot(nrm, a - cc) / den);
                }
                return r;
            }
            case DomainKind::Disc2D: {
                Vec2 w = Vec2{c[0], c[1]} - s * d->center;
                Vec2 uu{u[0], u[1]};
                double b = dot(w, uu), R = d->radius * s;
                return -b + std::sqrt(b * b - dot(w, w) + R * R);
            }
            case DomainKind::SmoothCurve2D:
                if (c[0] == 0 && c[1] == 0) {
                    double uu = d->boundary->u_of_angle(std::atan2(u[1], u[0]));
                    return norm(d->boundary->raw().eval(uu)) * s;
                }
                break;
        }
        double lo = 0, hi = d->diameter();
        std::vector<double> x(d->dim);
        for (int it = 0; it < 60; ++it) {
            double m = 0.5 * (lo + hi);
            for (int i = 0; i < d->dim; ++i) x[i] = c[i] + m * u[i];
            (contains(*d, x) ? lo : hi) = m;
        }
        return lo;
    }
};

}  // namespace

std::vector<LevelSetReport> levelset_measures(const WeightField& f, int j_max, std::size_t samples,
                                              std::uint64_t seed) {
    if (j_max < 0) throw std::invalid_argument("j_max must be nonnegative");
    const ConvexDomain& d = f.domain;
    const int n = d.dim;
    const double a = f.base;
    WeightField half = f.scaled(0.5);
    RadialView rv(d);
    const double sphere = 2 * std::pow(kPi, 0.5 * n) / gsl_sf_gamma(0.5 * n);

    const int K = 48;  // strata rho in [1 - 2^-k, 1 - 2^-k-1)
    const std::size_t per = std::max<std::size_t>(1, samples / K);
    const int J = j_max + 1;
    std::vector<double> mean(J, 0.0), var(J, 0.0);
    std::vector<std::size_t> hits(J, 0);
    std::vector<double> u(n), x(n), s1(J), s2(J);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < K; ++k) {
        double r0 = 1 - std::ldexp(1.0, -k), r1 = k == K - 1 ? 1.0 : 1 - std::ldexp(1.0, -k - 1);
        Rng g(split_seed(seed, static_cast<std::uint64_t>(k)));
        std::fill(s1.begin(), s1.end(), 0.0);
        std::fill(s2.begin(), s2.end(), 0.0);
        for (std::size_t t = 0; t < per; ++t) {
            double nn = 0;
            if (n == 1) u[0] = uniform(g, 0, 1) < 0.5 ? -1 : 1, nn = 1;
            else if (n == 2) {
                double th = uniform(g, 0, 2 * kPi);
                u[0] = std::cos(th);
                u[1] = std::sin(th);
                nn = 1;
            } else {
                for (auto& v : u) { v = gauss(g); nn += v * v; }
                nn = std::sqrt(nn);
            }
            for (auto& v : u) v /= nn;
            double rho = uniform(g, r0, r1);
            double R = rv.extent(u);
            for (int i = 0; i < n; ++i) x[i] = rv.c[i] + rho * R * u[i];
            int j = level_index(half.eval(x), a);
            if (j < J) {
                double W = sphere * (r1 - r0) * std::pow(rho, n - 1) * std::pow(R, n);
                s1[j] += W;
                s2[j] += W * W;
                ++hits[j];
            }
        }
        for (int j = 0; j < J; ++j) {
            double m = s1[j] / per;
            mean[j] += m;
            var[j] += std::max(0.0, s2[j] / per - m * m) / static_cast<double>(per);
        }
    }
    std::vector<LevelSetReport> out(J);
    for (int j = 0; j < J; ++j) {
        auto& r = out[j];
        r.j = j;
        r.measure = mean[j];
        r.std_error = std::sqrt(var[j]);
        r.samples = per * K;
        r.hits = hits[j];
        r.model_polytope = std::pow(static_cast<double>(j), n - 1) * std::pow(a, -j);
        r.model_curved = std::pow(a, -2.0 * j / (n + 1));
        r.unreliable = hits[j] < 100;
    }
    return out;
}

InequalityReport check_concavity(const WeightField& f, std::size_t trials, std::uint64_t seed) {
    const int n = f.domain.dim;
    ConvexDomain two = f.domain.scaled(2);
    Rng g(seed);
    InequalityReport rep;
    rep.trials = trials;
    std::vector<double> z(n);
    for (std::size_t k = 0; k < trials; ++k) {
        auto x = sample_inside(two, g), y = sample_inside(two, g);
        double t = uniform(g, 0, 1);
        for (int i = 0; i < n; ++i) z[i] = t * x[i] + (1 - t) * y[i];
        double lhs = std::pow(f.eval(z), 1.0 / n);
        double rhs = t * std::pow(f.eval(x), 1.0 / n) + (1 - t) * std::pow(f.eval(y), 1.0 / n);
        double v = rhs - lhs;
        rep.max_violation = std::max(rep.max_violation, v);
        if (v > 1e-9) ++rep.violations;
    }
    return rep;
}

InequalityReport check_sum_inequality(const WeightField& f, std::size_t trials, std::uint64_t seed) {
    const int n = f.domain.dim;
    const double a = f.base;
    WeightField dbl = f.scaled(2);
    ConvexDomain two = f.domain.scaled(2);
    const double L = n * std::log(2.0) / std::log(a);
    Rng g(seed);
    InequalityReport rep;
    rep.trials = trials;
    std::vector<double> z(n);
    for (std::size_t k = 0; k < trials; ++k) {
        auto x = sample_inside(two, g), y = sample_inside(two, g);
        for (int i = 0; i < n; ++i) z[i] = x[i] + y[i];
        double wx = f.eval(x), wy = f.eval(y), wz = dbl.eval(z);
        double v = std::ldexp(std::max(wx, wy), -n) - wz;
        rep.max_violation = std::max(rep.max_violation, v);
        if (v > 1e-9) ++rep.violations;
        int kz = level_index(wz, a), jx = level_index(wx, a), jy = level_index(wy, a);
        if (kz != INT_MAX && (jx < kz - L - 1 || jy < kz - L - 1)) ++rep.index_violations;
    }
    return rep;
}

WeightGrid tabulate(const WeightField& f, int N) {
    const int n = f.domain.dim;
    if (n > 2) throw std::invalid_argument("tabulation supports n <= 2");
    if (N < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
    WeightGrid gr;
    gr.n_per_axis = N;
    gr.dim = n;
    gr.lo = f.domain.bbox_lo();
    gr.hi = f.domain.bbox_hi();
    for (int i = 0; i < n; ++i) { gr.lo[i] *= 2; gr.hi[i] *= 2; }
    std::size_t total = n == 1 ? N : static_cast<std::size_t>(N) * N;
    gr.values.resize(total);
    std::vector<double> x(n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (int i = n - 1; i >= 0; --i) {
            std::size_t c = rem % N;
            rem /= N;
            x[i] = gr.lo[i] + (gr.hi[i] - gr.lo[i]) * static_cast<double>(c) / (N - 1);
        }
        gr.values[idx] = f.eval(x);
    }
    return gr;
}

}  // namespace pwlab
