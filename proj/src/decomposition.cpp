#include <algorithm>
#include <climits>

#include "pwlab/decomposition.hpp"
#include "pwlab/domain_io.hpp"

namespace pwlab {

std::string to_string(DecKind k) {
    switch (k) {
        case DecKind::Box: return "box";
        case DecKind::Smooth: return "smooth2d";
        case DecKind::Polygon: return "polygon2d";
    }
    return "?";
}

std::vector<double> Tile::to_unit(std::span<const double> x) const {
    const int n = static_cast<int>(a_center.size());
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = x[i] - a_center[i];
    Eigen::VectorXd u = a_edges_inv * d;
    return {u.data(), u.data() + n};
}

std::vector<double> Tile::from_unit(std::span<const double> u) const {
    const int n = static_cast<int>(a_center.size());
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = u[i];
    Eigen::VectorXd x = a_edges * v;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = x[i] + a_center[i];
    return out;
}

// 1-D cube pair: E_0 = (-1/2, 1/2), E_i = sgn i (1 - 2^-|i|, 1 - 2^-|i|-1);
// A_0 = (-2/3, 2/3), A_i = sgn i (1 - (3/2) 2^-|i|, 1 - (2/3) 2^-|i|-1).
double cube_e_lo(int i) {
    if (i == 0) return -0.5;
    return i > 0 ? 1 - std::ldexp(1.0, -i) : -(1 - std::ldexp(1.0, i - 1));
}
double cube_e_hi(int i) { return -cube_e_lo(-i); }
double cube_a_lo(int i) {
    if (i == 0) return -2.0 / 3.0;
    return i > 0 ? 1 - 1.5 * std::ldexp(1.0, -i) : -(1 - std::ldexp(1.0, i) / 3.0);
}
double cube_a_hi(int i) { return -cube_a_lo(-i); }

int cube_index_1d(double u) {
    double au = std::abs(u);
    if (au >= 1) return INT_MAX / 4;
    if (au < 0.5) return 0;
    int i = static_cast<int>(std::floor(-std::log2(1 - au)));
    // guard the floor against rounding at the dyadic endpoints
    while (i > 1 && au <= 1 - std::ldexp(1.0, -i)) --i;
    while (au >= 1 - std::ldexp(1.0, -i - 1)) ++i;
    return u > 0 ? i : -i;
}

int beta_1d(int i, int k) {
    auto sgn = [](int v) { return (v > 0) - (v < 0); };
    if (sgn(i) == sgn(k)) return sgn(i) * std::min(std::abs(i), std::abs(k));
    return 0;
}

namespace {

double signed_inside(const Polygon& p, Vec2 x) {
    double best = 1e300;
    for (std::size_t k = 0; k < p.size(); ++k) {
        Vec2 a = p[k], b = p[(k + 1) % p.size()];
        best = std::min(best, cross(b - a, x - a) / norm(b - a));
    }
    return best;
}

}  // namespace

int Decomposition::locate(std::span<const double> x) const {
    if (!contains(domain, x)) return -1;
    switch (kind) {
        case DecKind::Box: {
            std::vector<int> idx(domain.dim);
            int level = 0;
            for (int i = 0; i < domain.dim; ++i) {
                idx[i] = cube_index_1d(x[i] / (domain.half_widths[i] * domain.scale));
                level += std::abs(idx[i]);
            }
            if (level > j_max) return -1;
            auto it = index_map.find(idx);
            return it == index_map.end() ? -1 : it->second;
        }
        case DecKind::Smooth: {
            Polar p = to_polar(domain, {x[0], x[1]});
            if (p.r >= 1) return -1;
            int j = p.r < 0.75 ? 0 : static_cast<int>(std::floor(-std::log(1 - p.r) / std::log(4.0)));
            while (j > 0 && p.r <= 1 - std::pow(4.0, -j)) --j;
            while (p.r >= 1 - std::pow(4.0, -j - 1)) ++j;
            if (j > j_max) return -1;
            int i0 = std::min(counts[j] - 1, static_cast<int>(std::floor(p.t * counts[j])));
            return level_offset[j] + i0;
        }
        case DecKind::Polygon: {
            Vec2 y{x[0], x[1]};
            int best = -1;
            double bv = -1e300;
            for (std::size_t k = 0; k < charts.size(); ++k) {
                double v = signed_inside(charts[k].cell, y);
                if (v > bv) { bv = v; best = static_cast<int>(k); }
            }
            const auto& c = charts[best];
            Vec2 d = y - c.origin;
            double u1 = c.Linv[0] * d[0] + c.Linv[1] * d[1], u2 = c.Linv[2] * d[0] + c.Linv[3] * d[1];
            int i1 = cube_index_1d(u1), i2 = cube_index_1d(u2);
            if (i1 < 0 || i2 < 0 || i1 + i2 > j_max) return -1;
            auto it = index_map.find({best, i1, i2});
            return it == index_map.end() ? -1 : it->second;
        }
    }
    return -1;
}

bool Decomposition::in_tile(int t, std::span<const double> x) const {
    const Tile& T = tiles[t];
    switch (kind) {
        case DecKind::Box:
            for (int i = 0; i < domain.dim; ++i)
                if (!(x[i] > T.e_lo[i] && x[i] < T.e_hi[i])) return false;
            return true;
        case DecKind::Smooth: {
            Polar p = to_polar(domain, {x[0], x[1]});
            return p.r > T.r0 && p.r < T.r1 && p.t > T.t0 && p.t < T.t1;
        }
        case DecKind::Polygon:
            for (const auto& piece : T.e_pieces)
                if (polygon_contains(piece, {x[0], x[1]})) return true;
            return false;
    }
    return false;
}

bool Decomposition::in_G(int t, std::span<const double> x) const {
    const Tile& T = tiles[t];
    const double tol = 1e-12 * domain.diameter();
    switch (kind) {
        case DecKind::Box:
            for (int i = 0; i < domain.dim; ++i)
                if (x[i] < T.g_lo[i] - tol || x[i] > T.g_hi[i] + tol) return false;
            return true;
        case DecKind::Polygon:
            return polygon_contains(T.g_poly, {x[0], x[1]}) || signed_inside(T.g_poly, {x[0], x[1]}) > -tol;
        case DecKind::Smooth: {
            Polar p = to_polar(domain, {x[0], x[1]});
            if (p.r < T.g_rmin - 1e-12) return false;
            double w = T.g_t1 - T.g_t0;
            if (w >= 1) return true;
            double d = p.t - T.g_t0;
            d -= std::floor(d);
            return d <= w + 1e-12;
        }
    }
    return false;
}

Decomposition Decomposition::scaled(double s) const {
    Decomposition out = *this;
    out.domain = domain.scaled(s);
    const double vs = std::pow(s, domain.dim);
    auto sc = [s](std::vector<double>& v) {
        for (double& x : v) x *= s;
    };
    for (Tile& t : out.tiles) {
        t.measure *= vs;
        sc(t.centroid);
        sc(t.e_lo);
        sc(t.e_hi);
        for (auto& p : t.e_pieces) p = pwlab::scaled(p, s);
        t.e_hull = pwlab::scaled(t.e_hull, s);
        sc(t.a_center);
        t.a_edges *= s;
        t.a_edges_inv /= s;
        t.a_poly = pwlab::scaled(t.a_poly, s);
        sc(t.g_lo);
        sc(t.g_hi);
        t.g_poly = pwlab::scaled(t.g_poly, s);
    }
    for (auto& c : out.charts) {
        c.origin = s * c.origin;
        for (double& v : c.L) v *= s;
        for (double& v : c.Linv) v /= s;
        c.cell = pwlab::scaled(c.cell, s);
    }
    return out;
}

Decomposition decompose(const ConvexDomain& d, const DecompParams& p) {
    switch (d.kind) {
        case DomainKind::BoxN: return decompose_box(d, p.j_max);
        case DomainKind::Polygon2D: return decompose_polygon2d(d, p.j_max);
        case DomainKind::Disc2D:
        case DomainKind::SmoothCurve2D: return decompose_smooth2d(d, p.m, p.epsilon, p.j_max);
    }
    throw std::invalid_argument("unsupported domain");
}

int beta_index(const Decomposition& dec, int t1, int t2) {
    const Tile& A = dec.tiles[t1];
    const Tile& B = dec.tiles[t2];
    if (dec.kind == DecKind::Box) {
        std::vector<int> idx(A.index.size());
        int level = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            idx[k] = beta_1d(A.index[k], B.index[k]);
            level += std::abs(idx[k]);
        }
        auto it = dec.index_map.find(idx);
        if (level > dec.j_max || it == dec.index_map.end()) throw std::out_of_range("truncation exceeded");
        return it->second;
    }
    std::vector<double> mid(A.centroid.size());
    for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = 0.5 * (A.centroid[k] + B.centroid[k]);
    int t = dec.locate(mid);
    if (t < 0) throw std::out_of_range("truncation exceeded");
    return t;
}

namespace {

nlohmann::json poly_json(const Polygon& p) {
    nlohmann::json a = nlohmann::json::array();
    for (auto& v : p) a.push_back({v[0], v[1]});
    return a;
}

nlohmann::json mat_json(const Eigen::MatrixXd& M) {
    nlohmann::json a = nlohmann::json::array();
    for (int r = 0; r < M.rows(); ++r)
        for (int c = 0; c < M.cols(); ++c) a.push_back(M(r, c));
    return a;
}

}  // namespace

nlohmann::json decomposition_to_json(const Decomposition& dec) {
    using nlohmann::json;
    json j;
    j["domain"] = domain_to_json(dec.domain);
    j["kind"] = to_string(dec.kind);
    j["a"] = dec.a;
    j["j_max"] = dec.j_max;
    j["m"] = dec.m;
    j["epsilon"] = dec.epsilon;
    j["j0"] = dec.j0;
    j["counts"] = dec.counts;
    if (dec.kind == DecKind::Smooth) j["sector_constants"] = {{"M1", dec.M1}, {"M2", dec.M2}};
    json tiles = json::array();
    for (const Tile& t : dec.tiles) {
        json tj;
        tj["j"] = t.j;
        tj["index"] = t.index;
        tj["measure"] = t.measure;
        tj["centroid"] = t.centroid;
        json E;
        if (dec.kind == DecKind::Box) {
            E = {{"lo", t.e_lo}, {"hi", t.e_hi}};
        } else if (dec.kind == DecKind::Smooth) {
            E = {{"r", {t.r0, t.r1}}, {"t", {t.t0, t.t1}}, {"hull", poly_json(t.e_hull)}};
        } else {
            json pieces = json::array();
            for (auto& p : t.e_pieces) pieces.push_back(poly_json(p));
            E = {{"pieces", pieces}};
        }
        tj["E"] = E;
        tj["A"] = {{"center", t.a_center}, {"edges", mat_json(t.a_edges)}, {"ball", t.a_is_ball}, {"refit", t.a_refit}};
        Eigen::VectorXd c(t.a_center.size());
        for (std::size_t k = 0; k < t.a_center.size(); ++k) c[k] = t.a_center[k];
        Eigen::VectorXd off = -(t.a_edges_inv * c);
        tj["T"] = {{"matrix", mat_json(t.a_edges_inv)}, {"offset", std::vector<double>(off.data(), off.data() + off.size())}};
        if (dec.kind == DecKind::Box) tj["G"] = {{"lo", t.g_lo}, {"hi", t.g_hi}};
        else if (dec.kind == DecKind::Smooth) tj["G"] = {{"r_min", t.g_rmin}, {"t", {t.g_t0, t.g_t1}}};
        else tj["G"] = {{"polygon", poly_json(t.g_poly)}};
        tiles.push_back(std::move(tj));
    }
    j["tiles"] = std::move(tiles);
    return j;
}

Decomposition decomposition_from_json(const nlohmann::json& j) {
    ConvexDomain d = domain_from_json(j.at("domain"));
    DecompParams p;
    p.j_max = j.at("j_max").get<int>();
    p.m = j.value("m", 3);
    p.epsilon = j.value("epsilon", 0.05);
    Decomposition dec = decompose(d, p);
    if (j.contains("tiles") && j["tiles"].size() != dec.size())
        throw std::runtime_error("decomposition file does not match its construction parameters");
    return dec;
}

}  // namespace pwlab
