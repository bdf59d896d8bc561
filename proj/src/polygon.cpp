#include "pwlab/polygon.hpp"

#include <algorithm>
#include <limits>

namespace pwlab {

double signed_area(const Polygon& p) {
    double s = 0;
    for (std::size_t i = 0, n = p.size(); i < n; ++i) s += cross(p[i], p[(i + 1) % n]);
    return 0.5 * s;
}

Vec2 centroid(const Polygon& p) {
    double a = 0, cx = 0, cy = 0;
    for (std::size_t i = 0, n = p.size(); i < n; ++i) {
        const Vec2& u = p[i];
        const Vec2& v = p[(i + 1) % n];
        double c = cross(u, v);
        a += c;
        cx += (u[0] + v[0]) * c;
        cy += (u[1] + v[1]) * c;
    }
    if (std::abs(a) < 1e-300) {
        Vec2 m{0, 0};
        for (auto& q : p) m = m + q;
        return (1.0 / static_cast<double>(p.size())) * m;
    }
    return {cx / (3 * a), cy / (3 * a)};
}

bool is_strictly_convex_ccw(const Polygon& p) {
    std::size_t n = p.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 e1 = p[(i + 1) % n] - p[i];
        Vec2 e2 = p[(i + 2) % n] - p[(i + 1) % n];
        if (cross(e1, e2) <= 0) return false;
    }
    // total turning of 2*pi rules out self-intersecting stars
    double turn = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 e1 = p[(i + 1) % n] - p[i];
        Vec2 e2 = p[(i + 2) % n] - p[(i + 1) % n];
        turn += std::atan2(cross(e1, e2), dot(e1, e2));
    }
    return std::abs(turn - 2 * kPi) < 1e-6;
}

bool polygon_contains(const Polygon& p, Vec2 x) {
    for (std::size_t i = 0, n = p.size(); i < n; ++i) {
        if (cross(p[(i + 1) % n] - p[i], x - p[i]) <= 0) return false;
    }
    return true;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
    Polygon out = subject;
    for (std::size_t e = 0, m = clip.size(); e < m && !out.empty(); ++e) {
        Vec2 a = clip[e], b = clip[(e + 1) % m];
        Vec2 d = b - a;
        Polygon in;
        in.swap(out);
        for (std::size_t i = 0, n = in.size(); i < n; ++i) {
            Vec2 p = in[i], q = in[(i + 1) % n];
            double sp = cross(d, p - a), sq = cross(d, q - a);
            if (sp >= 0) out.push_back(p);
            if ((sp >= 0) != (sq >= 0)) {
                double t = sp / (sp - sq);
                out.push_back(p + t * (q - p));
            }
        }
    }
    if (out.size() < 3) out.clear();
    return out;
}

double distance_to_segment(Vec2 x, Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    double L2 = dot(d, d);
    double t = L2 > 0 ? std::clamp(dot(x - a, d) / L2, 0.0, 1.0) : 0.0;
    return norm(x - (a + t * d));
}

double distance_to_polygon_boundary(const Polygon& p, Vec2 x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, n = p.size(); i < n; ++i)
        best = std::min(best, distance_to_segment(x, p[i], p[(i + 1) % n]));
    return best;
}

Polygon convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    Polygon h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

Polygon minkowski_sum(const Polygon& a, const Polygon& b) {
    if (a.empty() || b.empty()) return {};
    // merge the edge sequences of both ccw polygons, each started at its lowest vertex
    auto lowest = [](const Polygon& p) {
        std::size_t k = 0;
        for (std::size_t i = 1; i < p.size(); ++i)
            if (p[i][1] < p[k][1] || (p[i][1] == p[k][1] && p[i][0] < p[k][0])) k = i;
        return k;
    };
    const std::size_t n = a.size(), m = b.size(), ia = lowest(a), ib = lowest(b);
    Polygon out;
    out.reserve(n + m);
    std::size_t i = 0, j = 0;
    while (i < n || j < m) {
        out.push_back(a[(ia + i) % n] + b[(ib + j) % m]);
        Vec2 ea = a[(ia + i + 1) % n] - a[(ia + i) % n], eb = b[(ib + j + 1) % m] - b[(ib + j) % m];
        double c = cross(ea, eb);
        if (j == m || (i < n && c > 0)) ++i;
        else if (i == n || c < 0) ++j;
        else { ++i; ++j; }
    }
    return out;
}

namespace {
bool separated_by_edges_of(const Polygon& a, const Polygon& b, double tol) {
    for (std::size_t i = 0, n = a.size(); i < n; ++i) {
        Vec2 e = a[(i + 1) % n] - a[i];
        Vec2 nrm{e[1], -e[0]};  // outward for ccw
        double len = norm(nrm);
        if (len == 0) continue;
        double amax = -std::numeric_limits<double>::infinity();
        for (auto& p : a) amax = std::max(amax, dot(nrm, p));
        double bmin = std::numeric_limits<double>::infinity();
        for (auto& q : b) bmin = std::min(bmin, dot(nrm, q));
        if (bmin >= amax - tol * len) return true;
    }
    return false;
}
}  // namespace

bool convex_intersect(const Polygon& a, const Polygon& b, double tol) {
    if (a.empty() || b.empty()) return false;
    return !separated_by_edges_of(a, b, tol) && !separated_by_edges_of(b, a, tol);
}

Polygon scaled(const Polygon& p, double s) {
    Polygon q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = s * p[i];
    return q;
}

Polygon translated(const Polygon& p, Vec2 t) {
    Polygon q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] + t;
    return q;
}

}  // namespace pwlab
