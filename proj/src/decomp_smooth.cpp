#include <gsl/gsl_integration.h>

#include <algorithm>
#include <sstream>

#include "pwlab/decomposition.hpp"

namespace pwlab {

namespace {

struct PolarMap {
    const ConvexDomain* d;
    Vec2 pc;
    Vec2 gamma(double t) const { return boundary_point(*d, t); }
    Vec2 at(double r, double t) const { return pc + r * (gamma(t) - pc); }
    double jac(double r, double t) const { return r * cross(gamma(t) - pc, boundary_tangent(*d, t)); }
};

const gsl_integration_glfixed_table* gl(int n) {
    static gsl_integration_glfixed_table* t8 = gsl_integration_glfixed_table_alloc(8);
    static gsl_integration_glfixed_table* t16 = gsl_integration_glfixed_table_alloc(16);
    return n == 8 ? t8 : t16;
}

// Area and centroid of {P(r, t) : r in (r0, r1), t in (t0, t1)}.
void sector_moments(const PolarMap& P, double r0, double r1, double t0, double t1, double& area, Vec2& cen) {
    area = 0;
    Vec2 m{0, 0};
    const auto* tr = gl(8);
    const auto* tt = gl(16);
    for (std::size_t a = 0; a < tt->n; ++a) {
        double t, wt;
        gsl_integration_glfixed_point(t0, t1, a, &t, &wt, tt);
        for (std::size_t b = 0; b < tr->n; ++b) {
            double r, wr;
            gsl_integration_glfixed_point(r0, r1, b, &r, &wr, tr);
            double w = wt * wr * P.jac(r, t);
            area += w;
            m = m + w * P.at(r, t);
        }
    }
    cen = (1.0 / area) * m;
}

Polygon inflate(const Polygon& p, double f) {
    Vec2 c = centroid(p);
    Polygon q(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) q[k] = c + f * (p[k] - c);
    return q;
}

// min/max over t in [t0, t1] of r * g(t), sampled then polished by ternary search.
std::pair<double, double> arc_extremes(const std::function<double(double)>& g, double t0, double t1) {
    const int S = 64;
    double lo = 1e300, hi = -1e300;
    int klo = 0, khi = 0;
    for (int k = 0; k <= S; ++k) {
        double v = g(t0 + (t1 - t0) * k / S);
        if (v < lo) { lo = v; klo = k; }
        if (v > hi) { hi = v; khi = k; }
    }
    auto polish = [&](int k, double sign) {
        double a = t0 + (t1 - t0) * std::max(0, k - 1) / S, b = t0 + (t1 - t0) * std::min(S, k + 1) / S;
        for (int it = 0; it < 80; ++it) {
            double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
            if (sign * g(m1) < sign * g(m2)) b = m2; else a = m1;
        }
        return g(0.5 * (a + b));
    };
    lo = std::min(lo, polish(klo, 1.0));
    hi = std::max(hi, polish(khi, -1.0));
    return {lo, hi};
}

}  // namespace

Decomposition decompose_smooth2d(const ConvexDomain& d, int m, double epsilon, int j_max) {
    if (d.kind != DomainKind::Disc2D && d.kind != DomainKind::SmoothCurve2D)
        throw std::invalid_argument("decompose_smooth2d needs a disc or a smooth curve");
    if (m < 0 || j_max < 0) throw std::invalid_argument("m and j_max must be nonnegative");
    if (!(epsilon > 0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
    if (d.kind == DomainKind::SmoothCurve2D && !(d.boundary->curvature_bounds().first > 0))
        throw std::invalid_argument("boundary curvature must be strictly positive");

    Decomposition dec;
    dec.domain = d;
    dec.kind = DecKind::Smooth;
    dec.a = 8;
    dec.j_max = j_max;
    dec.m = m;
    dec.epsilon = epsilon;
    dec.j0 = 1;
    PolarMap P{&d, polar_center(d)};

    auto lo = d.bbox_lo(), hi = d.bbox_hi();
    std::vector<std::string> failures;
    for (int j = 0; j <= j_max; ++j) {
        const int nj = 1 << (j + m);
        dec.counts.push_back(nj);
        dec.level_offset.push_back(static_cast<int>(dec.tiles.size()));
        const double r0 = j == 0 ? 0.0 : 1 - std::pow(4.0, -j);
        const double r1 = 1 - std::pow(4.0, -j - 1);
        for (int i = 1; i <= nj; ++i) {
            Tile t;
            t.j = j;
            t.index = {i};
            t.r0 = r0;
            t.r1 = r1;
            t.t0 = static_cast<double>(i - 1) / nj;
            t.t1 = static_cast<double>(i) / nj;
            Vec2 cen;
            sector_moments(P, r0, r1, t.t0, t.t1, t.measure, cen);
            t.centroid = {cen[0], cen[1]};

            std::vector<Vec2> pts;
            const int S = 16;
            for (int k = 0; k <= S; ++k) {
                double tt = t.t0 + (t.t1 - t.t0) * k / S;
                pts.push_back(P.at(r1, tt));
                pts.push_back(P.at(r0, tt));
            }
            t.e_hull = inflate(convex_hull(pts), 1.001);
            double xl = 1e300, xh = -1e300, yl = 1e300, yh = -1e300;
            for (auto& v : t.e_hull) {
                xl = std::min(xl, v[0]); xh = std::max(xh, v[0]);
                yl = std::min(yl, v[1]); yh = std::max(yh, v[1]);
            }
            t.e_lo = {xl, yl};
            t.e_hi = {xh, yh};

            if (j == 0) {
                // A_0 = {r < 4/5}; T maps its bounding box onto the unit cube
                t.a_is_ball = true;
                Vec2 blo = P.pc + 0.8 * (Vec2{lo[0], lo[1]} - P.pc), bhi = P.pc + 0.8 * (Vec2{hi[0], hi[1]} - P.pc);
                t.a_center = {0.5 * (blo[0] + bhi[0]), 0.5 * (blo[1] + bhi[1])};
                t.a_edges = Eigen::Matrix2d{{bhi[0] - blo[0], 0}, {0, bhi[1] - blo[1]}};
                Polygon ring;
                for (int k = 0; k < 128; ++k) ring.push_back(P.at(0.8, k / 128.0));
                t.a_poly = inflate(ring, 1.002);
            } else {
                // tangent frame at the tile's middle direction: x - pc = u (gamma - pc) + v gamma'
                const double tc = (i - 0.5) / nj;
                Eigen::Matrix2d F;
                Vec2 g = P.gamma(tc) - P.pc, gp = boundary_tangent(d, tc);
                F << g[0], gp[0], g[1], gp[1];
                Eigen::Matrix2d Fi = F.inverse();
                double bounds[2][2];
                for (int c = 0; c < 2; ++c) {
                    auto coord = [&](double r, double tt) {
                        Vec2 x = P.at(r, tt) - P.pc;
                        return Fi(c, 0) * x[0] + Fi(c, 1) * x[1];
                    };
                    double mn = 1e300, mx = -1e300;
                    for (double r : {r0, r1}) {
                        auto [a, b] = arc_extremes([&](double tt) { return coord(r, tt); }, t.t0, t.t1);
                        mn = std::min(mn, a);
                        mx = std::max(mx, b);
                    }
                    bounds[c][0] = mn;
                    bounds[c][1] = mx;
                }
                const double du = epsilon * std::pow(4.0, -j), dv = epsilon * std::ldexp(1.0, -j - m);
                double u0 = bounds[0][0] - du, u1 = bounds[0][1] + du;
                double v0 = bounds[1][0] - dv, v1 = bounds[1][1] + dv;
                Eigen::Vector2d mid = F * Eigen::Vector2d(0.5 * (u0 + u1), 0.5 * (v0 + v1));
                t.a_center = {P.pc[0] + mid[0], P.pc[1] + mid[1]};
                t.a_edges = F * Eigen::Vector2d(u1 - u0, v1 - v0).asDiagonal();
                for (auto [su, sv] : {std::pair{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}) {
                    Eigen::Vector2d x = t.a_edges * Eigen::Vector2d(su, sv);
                    t.a_poly.push_back({t.a_center[0] + x[0], t.a_center[1] + x[1]});
                }
                for (auto& v : t.a_poly)
                    if (!contains(d, v)) {
                        std::ostringstream os;
                        os << "(j=" << j << ", i=" << i << ")";
                        failures.push_back(os.str());
                        break;
                    }
            }
            t.a_edges_inv = t.a_edges.inverse();
            dec.tiles.push_back(std::move(t));
        }
    }
    if (!failures.empty()) {
        std::ostringstream os;
        os << "A_j^i not contained in the domain for " << failures.size() << " tile(s), first " << failures.front()
           << ": increase m or decrease epsilon";
        throw std::runtime_error(os.str());
    }

    // Sector constants: for z in E, the points x with (x + y)/2 = z, y in Omega,
    // form Omega ∩ (2z - Omega); its boundary is sampled to bound r and t.
    double m1 = 0, m2 = 0;
    for (Tile& t : dec.tiles) {
        if (t.j == 0) continue;
        const int nj = dec.counts[t.j];
        Rng g(split_seed(0x5eed, static_cast<std::uint64_t>(&t - dec.tiles.data())));
        std::vector<std::pair<double, double>> zs;
        const double er = 1e-9, et = 1e-9;
        for (double fr : {0.0, 0.5, 1.0})
            for (double ft : {0.0, 0.5, 1.0}) zs.push_back({t.r0 + er + fr * (t.r1 - t.r0 - 2 * er), t.t0 + et + ft * (t.t1 - t.t0 - 2 * et)});
        for (int k = 0; k < 8; ++k) zs.push_back({uniform(g, t.r0, t.r1), uniform(g, t.t0, t.t1)});
        double rmin = 1, qlo = 1e300, qhi = -1e300;
        const double tmid = (t.index[0] - 0.5) / nj;
        for (auto [zr, zt] : zs) {
            Vec2 z = P.at(zr, zt);
            double W = std::min(0.5, 4 * std::ldexp(1.0, -t.j));
            for (int attempt = 0; attempt < 6; ++attempt) {
                const int S = 96;
                bool edge_hit = false;
                for (int k = 0; k <= S; ++k) {
                    double tt = zt - W + 2 * W * k / S;
                    Vec2 b = P.gamma(tt - std::floor(tt));
                    for (int side = 0; side < 2; ++side) {
                        Vec2 x = side == 0 ? b : 2.0 * z - b;
                        Vec2 other = 2.0 * z - x;
                        bool ok = side == 0 ? contains(d, other) : contains(d, x);
                        if (!ok) continue;
                        if (k == 0 || k == S) edge_hit = true;
                        Polar px = to_polar(d, x);
                        rmin = std::min(rmin, px.r);
                        double q = px.t - tmid;
                        q -= std::round(q);
                        qlo = std::min(qlo, q * nj);
                        qhi = std::max(qhi, q * nj);
                    }
                }
                if (!edge_hit || W >= 0.5) break;
                W = std::min(0.5, 2 * W);
            }
        }
        m1 = std::max(m1, t.j + std::log(std::max(1 - rmin, 1e-300)) / std::log(4.0));
        // window (i - M2, i + M2) / n_j, i.e. (1/2 - M2, 1/2 + M2) cells around the middle
        m2 = std::max(m2, std::max(0.5 - qlo, qhi - 0.5));
    }
    dec.M1 = static_cast<int>(std::ceil(m1 - 1e-9));
    dec.M2 = static_cast<int>(std::floor(m2)) + 1;
    for (Tile& t : dec.tiles) {
        const int nj = dec.counts[t.j];
        if (t.j == 0) {
            t.g_rmin = 0;
            t.g_t0 = 0;
            t.g_t1 = 1;
            continue;
        }
        t.g_rmin = t.j - dec.M1 <= 0 ? 0.0 : 1 - std::pow(4.0, -(t.j - dec.M1));
        if (2 * dec.M2 >= nj) {
            t.g_t0 = 0;
            t.g_t1 = 1;
        } else {
            t.g_t0 = static_cast<double>(t.index[0] - dec.M2) / nj;
            t.g_t1 = static_cast<double>(t.index[0] + dec.M2) / nj;
        }
    }
    return dec;
}

}  // namespace pwlab
