#include <algorithm>
#include <cmath>

#include "pwlab/decomposition.hpp"

namespace pwlab {

namespace {

Vec2 chart_apply(const CornerChart& c, double u1, double u2) {
    return c.origin + Vec2{c.L[0] * u1 + c.L[1] * u2, c.L[2] * u1 + c.L[3] * u2};
}

Polygon chart_box(const CornerChart& c, double lo1, double hi1, double lo2, double hi2) {
    Polygon p = {chart_apply(c, lo1, lo2), chart_apply(c, hi1, lo2), chart_apply(c, hi1, hi2), chart_apply(c, lo1, hi2)};
    if (signed_area(p) < 0) std::reverse(p.begin(), p.end());
    return p;
}

bool inside_closed(const Polygon& omega, const Polygon& p, double tol) {
    for (auto& v : p)
        if (!polygon_contains(omega, v) && distance_to_polygon_boundary(omega, v) > tol) return false;
    return true;
}

long long quant(double v, double scale) { return std::llround(v / scale * 1e9); }

}  // namespace

Decomposition decompose_polygon2d(const ConvexDomain& d, int j_max) {
    if (d.kind != DomainKind::Polygon2D) throw std::invalid_argument("decompose_polygon2d needs a polygon");
    if (!is_strictly_convex_ccw(d.vertices)) throw std::invalid_argument("polygon must be strictly convex");
    if (j_max < 0) throw std::invalid_argument("j_max must be nonnegative");
    const double s = d.scale;
    Polygon omega = scaled(d.vertices, s);
    const std::size_t K = omega.size();
    const Vec2 g = centroid(omega);
    const double diam = d.diameter();

    Decomposition dec;
    dec.domain = d;
    dec.kind = DecKind::Polygon;
    dec.a = 2;
    dec.j_max = j_max;
    dec.j0 = 1;
    dec.counts.assign(j_max + 1, 0);

    // Corner chart at v_k: u -> v_k + lambda ((1 - u1)/2) e1 + lambda ((1 - u2)/2) e2 sends the cube
    // corner (1, 1) to v_k and its two edges along the polygon edges. lambda >= 1 is raised when the
    // centroid would fall outside the part u > -1/2 covered by nonnegative cube indices.
    for (std::size_t k = 0; k < K; ++k) {
        Vec2 v = omega[k], e1 = omega[(k + 1) % K] - v, e2 = omega[(k + K - 1) % K] - v;
        double det = cross(e1, e2);
        Vec2 w = g - v;
        double al = cross(w, e2) / det, be = cross(e1, w) / det;
        CornerChart c;
        c.lambda = std::max(1.0, (4.0 / 3.0) * std::max(al, be) * 1.0001);
        const double h = 0.5 * c.lambda;
        c.origin = v + h * (e1 + e2);
        c.L = {-h * e1[0], -h * e2[0], -h * e1[1], -h * e2[1]};
        double dl = c.L[0] * c.L[3] - c.L[1] * c.L[2];
        c.Linv = {c.L[3] / dl, -c.L[1] / dl, -c.L[2] / dl, c.L[0] / dl};
        Vec2 mk = 0.5 * (omega[k] + omega[(k + 1) % K]), mp = 0.5 * (omega[k] + omega[(k + K - 1) % K]);
        c.cell = {v, mk, g, mp};
        if (!is_strictly_convex_ccw(c.cell)) throw std::runtime_error("corner cell is not convex; polygon too skewed for corner charts");
        dec.charts.push_back(c);
    }

    std::map<std::vector<long long>, int> by_A;
    std::vector<int> refit;
    for (std::size_t k = 0; k < K; ++k) {
        const CornerChart& c = dec.charts[k];
        for (int j = 0; j <= j_max; ++j)
            for (int i1 = j; i1 >= 0; --i1) {
                int i2 = j - i1;
                Polygon E = chart_box(c, cube_e_lo(i1), cube_e_hi(i1), cube_e_lo(i2), cube_e_hi(i2));
                Polygon piece = clip_convex(E, c.cell);
                if (piece.size() < 3 || signed_area(piece) <= 1e-14 * d.volume()) continue;
                double a1lo = cube_a_lo(i1), a1hi = cube_a_hi(i1), a2lo = cube_a_lo(i2), a2hi = cube_a_hi(i2);
                Vec2 ac = chart_apply(c, 0.5 * (a1lo + a1hi), 0.5 * (a2lo + a2hi));
                Eigen::Matrix2d B;
                B << c.L[0] * (a1hi - a1lo), c.L[1] * (a2hi - a2lo), c.L[2] * (a1hi - a1lo), c.L[3] * (a2hi - a2lo);
                // identical pulled-back A (up to column order and sign) means the same tile seen from two charts
                std::vector<long long> key = {quant(ac[0], diam), quant(ac[1], diam)};
                std::vector<std::array<long long, 2>> cols = {{quant(B(0, 0), diam), quant(B(1, 0), diam)},
                                                              {quant(B(0, 1), diam), quant(B(1, 1), diam)}};
                for (auto& col : cols)
                    if (col[0] < 0 || (col[0] == 0 && col[1] < 0)) col = {-col[0], -col[1]};
                std::sort(cols.begin(), cols.end());
                for (auto& col : cols) key.insert(key.end(), col.begin(), col.end());
                key.push_back(j);
                auto it = by_A.find(key);
                if (it != by_A.end()) {
                    Tile& t = dec.tiles[it->second];
                    t.e_pieces.push_back(piece);
                    dec.index_map[{static_cast<int>(k), i1, i2}] = it->second;
                    continue;
                }
                Tile t;
                t.j = j;
                t.index = {static_cast<int>(k), i1, i2};
                t.e_pieces.push_back(piece);
                t.a_center = {ac[0], ac[1]};
                t.a_edges = B;
                t.a_poly = chart_box(c, a1lo, a1hi, a2lo, a2hi);
                int id = static_cast<int>(dec.tiles.size());
                by_A[key] = id;
                dec.index_map[{static_cast<int>(k), i1, i2}] = id;
                dec.tiles.push_back(std::move(t));
            }
    }

    for (std::size_t id = 0; id < dec.tiles.size(); ++id) {
        Tile& t = dec.tiles[id];
        std::vector<Vec2> pts;
        double area = 0;
        Vec2 m{0, 0};
        for (auto& p : t.e_pieces) {
            double a = signed_area(p);
            area += a;
            m = m + a * centroid(p);
            pts.insert(pts.end(), p.begin(), p.end());
        }
        t.measure = area;
        Vec2 cen = (1.0 / area) * m;
        t.centroid = {cen[0], cen[1]};
        t.e_hull = convex_hull(pts);
        double xl = 1e300, xh = -1e300, yl = 1e300, yh = -1e300;
        for (auto& v : t.e_hull) {
            xl = std::min(xl, v[0]); xh = std::max(xh, v[0]);
            yl = std::min(yl, v[1]); yh = std::max(yh, v[1]);
        }
        t.e_lo = {xl, yl};
        t.e_hi = {xh, yh};

        if (!inside_closed(omega, t.a_poly, 1e-12 * diam)) {
            // Below the first genuine level: shrink A to the E bounding box in A's own frame and inflate by
            // the largest factor up to the cube ratio 4/3 that keeps it inside the polygon.
            t.a_refit = true;
            refit.push_back(t.j);
            Eigen::Matrix2d Bi = t.a_edges.inverse();
            double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
            for (auto& v : t.e_hull) {
                Eigen::Vector2d u = Bi * Eigen::Vector2d(v[0] - t.a_center[0], v[1] - t.a_center[1]);
                for (int a = 0; a < 2; ++a) { lo[a] = std::min(lo[a], u[a]); hi[a] = std::max(hi[a], u[a]); }
            }
            Eigen::Vector2d mid(0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]));
            Eigen::Vector2d cnew = t.a_edges * mid;
            auto build = [&](double f, Tile& out) {
                out.a_center = {t.a_center[0] + cnew[0], t.a_center[1] + cnew[1]};
                out.a_edges = t.a_edges * Eigen::Vector2d(f * (hi[0] - lo[0]), f * (hi[1] - lo[1])).asDiagonal();
                out.a_poly.clear();
                for (auto [su, sv] : {std::pair{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}) {
                    Eigen::Vector2d x = out.a_edges * Eigen::Vector2d(su, sv);
                    out.a_poly.push_back({out.a_center[0] + x[0], out.a_center[1] + x[1]});
                }
                if (signed_area(out.a_poly) < 0) std::reverse(out.a_poly.begin(), out.a_poly.end());
            };
            Tile trial = t;
            double flo = 1.0, fhi = 4.0 / 3.0;
            build(fhi, trial);
            if (!inside_closed(omega, trial.a_poly, 1e-12 * diam)) {
                build(1.0 + 1e-6, trial);
                if (!inside_closed(omega, trial.a_poly, 1e-12 * diam))
                    throw std::runtime_error("no parallelepiped around a low-level polygon tile fits inside the domain");
                for (int it = 0; it < 50; ++it) {
                    double f = 0.5 * (flo + fhi);
                    build(f, trial);
                    (inside_closed(omega, trial.a_poly, 1e-12 * diam) ? flo : fhi) = f;
                }
                fhi = flo;
            }
            build(fhi, t);
        }
        t.a_edges_inv = t.a_edges.inverse();

        // G = Omega ∩ (2 hull(E) - Omega)
        Polygon twoE = scaled(t.e_hull, 2.0), negO = scaled(omega, -1.0);
        t.g_poly = clip_convex(minkowski_sum(twoE, negO), omega);
        ++dec.counts[t.j];
    }
    for (int j : refit) dec.j0 = std::max(dec.j0, j + 1);

    // stable order by level, keeping construction order inside a level
    std::vector<int> order(dec.tiles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return dec.tiles[x].j < dec.tiles[y].j; });
    std::vector<int> newpos(order.size());
    std::vector<Tile> sorted;
    for (std::size_t i = 0; i < order.size(); ++i) {
        newpos[order[i]] = static_cast<int>(i);
        sorted.push_back(std::move(dec.tiles[order[i]]));
    }
    dec.tiles = std::move(sorted);
    for (auto& [key, v] : dec.index_map) v = newpos[v];
    return dec;
}

}  // namespace pwlab
