#include "pwlab/hankel.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <functional>

namespace pwlab {

HankelGrid make_hankel_grid(const ConvexDomain& d, double h, std::uint64_t seed) {
    if (!(h > 0)) throw std::invalid_argument("quadrature spacing must be positive");
    if (d.dim > 2) throw std::invalid_argument("Hankel grids support n <= 2");
    HankelGrid g;
    g.domain = d;
    g.n = d.dim;
    g.lo = d.bbox_lo();
    auto hi = d.bbox_hi();
    for (int k = 0; k < g.n; ++k) {
        int K = std::max(1, static_cast<int>(std::lround((hi[k] - g.lo[k]) / h)));
        g.K.push_back(K);
        g.step.push_back((hi[k] - g.lo[k]) / K);
        g.cell *= g.step.back();
    }
    WeightField w = normalize(d, seed).scaled(0.5);
    const int K1 = g.n == 2 ? g.K[1] : 1;
    std::vector<double> x(g.n);
    for (int a = 0; a < g.K[0]; ++a)
        for (int b = 0; b < K1; ++b) {
            x[0] = g.lo[0] + (a + 0.5) * g.step[0];
            if (g.n == 2) x[1] = g.lo[1] + (b + 0.5) * g.step[1];
            if (!contains(d, x)) continue;
            double v = w.eval(x);
            if (!(v > 0)) continue;  // a node on the boundary carries no weight
            g.index.push_back({a, b});
            g.x.insert(g.x.end(), x.begin(), x.end());
            g.weight.push_back(v);
        }
    if (g.index.empty()) throw std::invalid_argument("no quadrature nodes inside the domain; decrease h");
    return g;
}

SumLattice sum_lattice(const HankelGrid& g, const Symbol& f) {
    if (f.dim() != g.n) throw std::invalid_argument("symbol dimension does not match the domain");
    SumLattice L;
    for (int k = 0; k < g.n; ++k) L.side.push_back(2 * g.K[k] - 1);
    std::vector<double> x(g.n);
    const int s1 = g.n == 2 ? L.side[1] : 1;
    L.values.resize(static_cast<std::size_t>(L.side[0]) * s1);
    for (int a = 0; a < L.side[0]; ++a)
        for (int b = 0; b < s1; ++b) {
            // (lo + (i + 1/2) h) + (lo + (k + 1/2) h) = 2 lo + (i + k + 1) h
            x[0] = 2 * g.lo[0] + (a + 1) * g.step[0];
            if (g.n == 2) x[1] = 2 * g.lo[1] + (b + 1) * g.step[1];
            L.values[static_cast<std::size_t>(a) * s1 + b] = f.eval(x);
        }
    return L;
}

namespace {

std::vector<cplx> weight_powers(const HankelGrid& g, cplx e) {
    std::vector<cplx> out(g.size());
    const double half = std::sqrt(g.cell);
    for (std::size_t q = 0; q < g.size(); ++q) out[q] = std::exp(e * std::log(g.weight[q])) * half;
    return out;
}

}  // namespace

Eigen::MatrixXcd assemble_hankel(const HankelGrid& g, const Symbol& f, cplx sigma, cplx tau) {
    SumLattice L = sum_lattice(g, f);
    auto ws = weight_powers(g, sigma), wt = weight_powers(g, tau);
    const std::size_t N = g.size();
    Eigen::MatrixXcd M(N, N);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t q = 0; q < N; ++q) M(q, r) = L.at(g.index[q], g.index[r]) * ws[q] * wt[r];
    return M;
}

Eigen::MatrixXd assemble_hankel_real(const HankelGrid& g, const Symbol& f, double sigma, double tau) {
    if (!f.real_valued()) throw std::invalid_argument("real assembly needs a real-valued symbol");
    SumLattice L = sum_lattice(g, f);
    auto ws = weight_powers(g, sigma), wt = weight_powers(g, tau);
    const std::size_t N = g.size();
    Eigen::MatrixXd M(N, N);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t q = 0; q < N; ++q) M(q, r) = (L.at(g.index[q], g.index[r]) * ws[q] * wt[r]).real();
    return M;
}

std::vector<double> singular_values(Eigen::MatrixXcd m) {
    const lapack_int rows = static_cast<lapack_int>(m.rows()), cols = static_cast<lapack_int>(m.cols());
    std::vector<double> s(std::min(rows, cols));
    if (s.empty()) return s;
    lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, m.data(), rows, s.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("zgesdd failed with info " + std::to_string(info));
    return s;
}

std::vector<double> singular_values_symmetric(Eigen::MatrixXd m) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    if (m.cols() != n) throw std::invalid_argument("symmetric eigensolver needs a square matrix");
    std::vector<double> w(n);
    if (n == 0) return w;
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, m.data(), n, w.data());
    if (info != 0) throw std::runtime_error("dsyevd failed with info " + std::to_string(info));
    for (double& v : w) v = std::abs(v);
    std::sort(w.begin(), w.end(), std::greater<>());
    return w;
}

double schatten_norm(std::span<const double> sv, double p) {
    if (!(p >= 1)) throw std::invalid_argument("Schatten exponent p must be >= 1");
    if (std::isinf(p)) {
        double m = 0;
        for (double v : sv) m = std::max(m, v);
        return m;
    }
    double s = 0;
    for (double v : sv) s += p == 1 ? v : p == 2 ? v * v : std::pow(v, p);
    return std::pow(s, 1 / p);
}

double top_singular_value(const Eigen::MatrixXcd& m, int max_iter, double tol) {
    if (m.size() == 0) return 0;
    // deterministic start with no special alignment
    Eigen::VectorXcd v(m.cols());
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = cplx(1.0 + 0.01 * std::sin(1.0 + k), 0.01 * std::cos(2.0 + k));
    v.normalize();
    double last = 0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd w = m.adjoint() * (m * v);
        double lam = std::sqrt(w.norm());
        if (lam == 0) return 0;
        v = w / w.norm();
        if (std::abs(lam - last) <= tol * lam) return lam;
        last = lam;
    }
    return last;
}

double hs_norm_squared(const HankelGrid& g, const Symbol& f, double sigma, double tau) {
    SumLattice L = sum_lattice(g, f);
    const std::size_t N = g.size();
    std::vector<double> ws(N), wt(N);
    for (std::size_t q = 0; q < N; ++q) {
        ws[q] = std::pow(g.weight[q], 2 * sigma) * g.cell;
        wt[q] = std::pow(g.weight[q], 2 * tau) * g.cell;
    }
    std::vector<double> mod2(L.values.size());
    for (std::size_t k = 0; k < mod2.size(); ++k) mod2[k] = std::norm(L.values[k]);
    const std::size_t s1 = g.n == 2 ? L.side[1] : 1;
    double total = 0;
    for (std::size_t q = 0; q < N; ++q) {
        double row = 0;
        const auto& a = g.index[q];
        for (std::size_t r = 0; r < N; ++r) {
            const auto& b = g.index[r];
            row += mod2[static_cast<std::size_t>(a[0] + b[0]) * s1 + (g.n == 2 ? a[1] + b[1] : 0)] * wt[r];
        }
        total += row * ws[q];
    }
    return total;
}

namespace {

struct GL {
    std::vector<double> x, w;
    GL(int order, double a, double b) : x(order), w(order) {
        gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(order);
        for (int k = 0; k < order; ++k) gsl_integration_glfixed_point(a, b, k, &x[k], &w[k], t);
        gsl_integration_glfixed_table_free(t);
    }
};

double lens_area(double R, double d) {
    if (d >= 2 * R) return 0;
    return 2 * R * R * std::acos(d / (2 * R)) - 0.5 * d * std::sqrt(4 * R * R - d * d);
}

}  // namespace

double hs_identity_oracle(const ConvexDomain& d, const Symbol& f, int order) {
    if (d.dim > 2) throw std::invalid_argument("oracle supports n <= 2");
    if (d.kind == DomainKind::Disc2D) {
        const double R = d.radius * d.scale;
        const Vec2 c = 2.0 * polar_center(d);
        // the lens area has a square-root edge at 2R; substituting r = 2R (1 - u^2) removes it
        GL gr(order, 0, 1);
        const int nt = 2 * order;
        double s = 0;
        for (int i = 0; i < order; ++i) {
            double u = gr.x[i], r = 2 * R * (1 - u * u), jac = 4 * R * u;
            double m = lens_area(R, r), ring = 0;
            for (int k = 0; k < nt; ++k) {
                double t = 2 * kPi * (k + 0.5) / nt;
                ring += std::norm(f.eval(c + Vec2{r * std::cos(t), r * std::sin(t)}));
            }
            s += gr.w[i] * jac * r * m * ring * (2 * kPi / nt);
        }
        return s;
    }
    ConvexDomain dbl = d.scaled(2);
    auto lo = dbl.bbox_lo(), hi = dbl.bbox_hi();
    std::vector<double> x(d.dim);
    if (d.dim == 1) {
        GL g(order, lo[0], hi[0]);
        double s = 0;
        for (int i = 0; i < order; ++i) {
            x[0] = g.x[i];
            s += g.w[i] * std::norm(f.eval(x)) * intersection_volume(d, x);
        }
        return s;
    }
    GL g0(order, lo[0], hi[0]), g1(order, lo[1], hi[1]);
    double s = 0;
    for (int i = 0; i < order; ++i)
        for (int k = 0; k < order; ++k) {
            x[0] = g0.x[i];
            x[1] = g1.x[k];
            double m = intersection_volume(d, x);
            if (m > 0) s += g0.w[i] * g1.w[k] * std::norm(f.eval(x)) * m;
        }
    return s;
}

std::vector<MultiplierRow> schur_multiplier_check(const HankelGrid& g, const Symbol& multiplier, double multiplier_l1,
                                                  const Eigen::MatrixXd& k, double rel_slack) {
    const std::size_t N = g.size();
    if (static_cast<std::size_t>(k.rows()) != N || static_cast<std::size_t>(k.cols()) != N)
        throw std::invalid_argument("kernel matrix does not match the grid");
    if (!multiplier.real_valued() || !k.isApprox(k.transpose(), 1e-14))
        throw std::invalid_argument("multiplier check expects a real even multiplier and a symmetric kernel");
    SumLattice L = sum_lattice(g, multiplier);
    Eigen::MatrixXd prod(N, N);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t q = 0; q < N; ++q) prod(q, r) = L.at(g.index[q], g.index[r]).real() * k(q, r);
    auto s_prod = singular_values_symmetric(prod);
    auto s_k = singular_values_symmetric(k);
    std::vector<MultiplierRow> rows;
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
        MultiplierRow r;
        r.p = p;
        r.lhs = schatten_norm(s_prod, p);
        r.rhs = multiplier_l1 * schatten_norm(s_k, p);
        r.slack = r.rhs - r.lhs;
        r.holds = r.lhs <= r.rhs * (1 + rel_slack);
        rows.push_back(r);
    }
    return rows;
}

ToeplitzReport toeplitz_norm_check(double a, int N) {
    if (!(a > 1)) throw std::invalid_argument("Toeplitz base must exceed 1");
    if (N < 1) throw std::invalid_argument("Toeplitz size must be positive");
    ToeplitzReport r;
    r.N = N;
    r.bound = 2 / (1 - 1 / a) - 1;
    // symmetric with positive entries: the Perron vector is positive and power iteration from the ones
    // vector converges to the norm; products use the geometric recursion, O(N) per step
    std::vector<double> v(N, 1.0 / std::sqrt(N)), w(N);
    const double c = 1 / a;
    double lam = 0;
    for (int it = 0; it < 100000; ++it) {
        // w_i = sum_k c^{|i-k|} v_k = left_i + right_i - v_i
        double acc = 0;
        for (int i = 0; i < N; ++i) {
            acc = acc * c + v[i];
            w[i] = acc;
        }
        acc = 0;
        for (int i = N - 1; i >= 0; --i) {
            acc = acc * c + v[i];
            w[i] += acc - v[i];
        }
        double nw = 0;
        for (double x : w) nw += x * x;
        nw = std::sqrt(nw);
        for (int i = 0; i < N; ++i) v[i] = w[i] / nw;
        if (std::abs(nw - lam) <= 1e-14 * nw) {
            lam = nw;
            break;
        }
        lam = nw;
    }
    r.norm = lam;
    return r;
}

}  // namespace pwlab
