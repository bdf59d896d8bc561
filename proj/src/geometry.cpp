#include "pwlab/geometry.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_min.h>

#include <algorithm>
#include <limits>
#include <mutex>

namespace pwlab {

std::string to_string(DomainKind k) {
    switch (k) {
        case DomainKind::BoxN: return "BoxN";
        case DomainKind::Polygon2D: return "Polygon2D";
        case DomainKind::Disc2D: return "Disc2D";
        case DomainKind::SmoothCurve2D: return "SmoothCurve2D";
    }
    return "?";
}

DomainKind domain_kind_from_string(const std::string& s) {
    if (s == "BoxN") return DomainKind::BoxN;
    if (s == "Polygon2D") return DomainKind::Polygon2D;
    if (s == "Disc2D") return DomainKind::Disc2D;
    if (s == "SmoothCurve2D") return DomainKind::SmoothCurve2D;
    throw std::invalid_argument("unknown domain kind: " + s);
}

namespace {

void silence_gsl() {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
}

Vec2 apply(const std::array<double, 4>& M, Vec2 v) { return {M[0] * v[0] + M[1] * v[1], M[2] * v[0] + M[3] * v[1]}; }

const gsl_integration_glfixed_table* gl16() {
    static gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(16);
    return t;
}

template <class F>
double gl_integrate(F&& f, double a, double b) {
    const auto* t = gl16();
    double s = 0;
    for (std::size_t i = 0; i < t->n; ++i) {
        double xi, wi;
        gsl_integration_glfixed_point(a, b, i, &xi, &wi, t);
        s += wi * f(xi);
    }
    return s;
}

template <class F>
double gsl_call(double x, void* p) {
    return (*static_cast<F*>(p))(x);
}

}  // namespace

RawCurve make_raw_curve(const CurveSpec& spec) {
    std::function<Vec2(double)> e, d1, d2;
    if (spec.type == "ellipse") {
        double ca = std::cos(spec.rotation), sa = std::sin(spec.rotation);
        std::array<double, 4> R{ca, -sa, sa, ca};
        double a = spec.a, b = spec.b;
        Vec2 c = spec.center;
        if (a <= 0 || b <= 0) throw std::invalid_argument("ellipse semi-axes must be positive");
        e = [=](double u) {
            double th = 2 * kPi * u;
            return c + apply(R, {a * std::cos(th), b * std::sin(th)});
        };
        d1 = [=](double u) {
            double th = 2 * kPi * u;
            return (2 * kPi) * apply(R, {-a * std::sin(th), b * std::cos(th)});
        };
        d2 = [=](double u) {
            double th = 2 * kPi * u;
            return (-4 * kPi * kPi) * apply(R, {a * std::cos(th), b * std::sin(th)});
        };
    } else if (spec.type == "radial_fourier") {
        auto cc = spec.cos_coef, ss = spec.sin_coef;
        double r0 = spec.r0;
        Vec2 c = spec.center;
        auto radial = [=](double th, double& r, double& r1, double& r2) {
            r = r0;
            r1 = r2 = 0;
            std::size_t K = std::max(cc.size(), ss.size());
            for (std::size_t k = 1; k <= K; ++k) {
                double ak = k <= cc.size() ? cc[k - 1] : 0.0, bk = k <= ss.size() ? ss[k - 1] : 0.0;
                double ck = std::cos(k * th), sk = std::sin(k * th), kk = static_cast<double>(k);
                r += ak * ck + bk * sk;
                r1 += kk * (-ak * sk + bk * ck);
                r2 += -kk * kk * (ak * ck + bk * sk);
            }
        };
        e = [=](double u) {
            double th = 2 * kPi * u, r, r1, r2;
            radial(th, r, r1, r2);
            return c + Vec2{r * std::cos(th), r * std::sin(th)};
        };
        d1 = [=](double u) {
            double th = 2 * kPi * u, r, r1, r2;
            radial(th, r, r1, r2);
            Vec2 ev{std::cos(th), std::sin(th)}, ep{-std::sin(th), std::cos(th)};
            return (2 * kPi) * (r1 * ev + r * ep);
        };
        d2 = [=](double u) {
            double th = 2 * kPi * u, r, r1, r2;
            radial(th, r, r1, r2);
            Vec2 ev{std::cos(th), std::sin(th)}, ep{-std::sin(th), std::cos(th)};
            return (4 * kPi * kPi) * ((r2 - r) * ev + (2 * r1) * ep);
        };
    } else {
        throw std::invalid_argument("unknown curve type: " + spec.type);
    }
    const auto M = spec.M;
    const Vec2 off = spec.offset;
    double det = M[0] * M[3] - M[1] * M[2];
    if (det == 0) throw std::invalid_argument("singular affine map on curve");
    RawCurve rc;
    if (det > 0) {
        rc.eval = [=](double u) { return apply(M, e(u)) + off; };
        rc.d1 = [=](double u) { return apply(M, d1(u)); };
        rc.d2 = [=](double u) { return apply(M, d2(u)); };
    } else {  // keep counterclockwise orientation
        rc.eval = [=](double u) { return apply(M, e(1 - u)) + off; };
        rc.d1 = [=](double u) { return -1.0 * apply(M, d1(1 - u)); };
        rc.d2 = [=](double u) { return apply(M, d2(1 - u)); };
    }
    return rc;
}

// ---------------------------------------------------------------- boundary

double BoundaryParam::speed(double u) const { return norm(curve_.d1(u)); }

double BoundaryParam::partial_length(double u0, double u1) const {
    return gl_integrate([this](double u) { return speed(u); }, u0, u1);
}

BoundaryParam BoundaryParam::build(const RawCurve& curve, int panels) {
    silence_gsl();
    BoundaryParam bp;
    bp.curve_ = curve;
    const int P = panels;
    bp.u_tab_.resize(P + 1);
    bp.s_tab_.assign(P + 1, 0.0);
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(64);
    auto sp = [&bp](double u) { return bp.speed(u); };
    gsl_function F{&gsl_call<decltype(sp)>, &sp};
    for (int k = 0; k <= P; ++k) bp.u_tab_[k] = static_cast<double>(k) / P;
    for (int k = 0; k < P; ++k) {
        double res, err;
        gsl_integration_qag(&F, bp.u_tab_[k], bp.u_tab_[k + 1], 0, 1e-13, 64, GSL_INTEG_GAUSS21, ws, &res, &err);
        bp.s_tab_[k + 1] = bp.s_tab_[k] + res;
    }
    gsl_integration_workspace_free(ws);
    bp.length_ = bp.s_tab_[P];

    Vec2 c0 = curve.eval(0), c1 = curve.eval(1);
    if (norm(c0 - c1) > 1e-9 * std::max(1.0, bp.length_)) throw std::invalid_argument("curve is not closed");

    double area = 0;
    for (int k = 0; k < P; ++k)
        area += gl_integrate([&](double u) { return cross(curve.eval(u), curve.d1(u)); }, bp.u_tab_[k], bp.u_tab_[k + 1]);
    bp.area_ = 0.5 * area;
    if (bp.area_ <= 0) throw std::invalid_argument("curve must be counterclockwise");

    bp.kmin_ = std::numeric_limits<double>::infinity();
    bp.kmax_ = -bp.kmin_;
    const int S = 8192;
    for (int k = 0; k < S; ++k) {
        double u = (k + 0.5) / S;
        Vec2 a = curve.d1(u), b = curve.d2(u);
        double sp3 = std::pow(norm(a), 3);
        double kap = cross(a, b) / sp3;
        bp.kmin_ = std::min(bp.kmin_, kap);
        bp.kmax_ = std::max(bp.kmax_, kap);
    }
    if (!(bp.kmin_ > 0)) throw std::invalid_argument("boundary curvature must be strictly positive");

    // bounding box and the parameters of the leftmost/rightmost points
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (int k = 0; k < S; ++k) {
        double u = static_cast<double>(k) / S;
        Vec2 p = curve.eval(u);
        if (p[0] < xmin) { xmin = p[0]; bp.u_xmin_ = u; }
        if (p[0] > xmax) { xmax = p[0]; bp.u_xmax_ = u; }
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    }
    auto refine = [&](double u0, double sign, int axis) {
        double lo = u0 - 1.0 / S, hi = u0 + 1.0 / S;
        for (int it = 0; it < 200; ++it) {
            double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            double f1 = sign * curve.eval(m1 - std::floor(m1))[axis];
            double f2 = sign * curve.eval(m2 - std::floor(m2))[axis];
            if (f1 < f2) hi = m2; else lo = m1;
        }
        double u = 0.5 * (lo + hi);
        return u - std::floor(u);
    };
    bp.u_xmin_ = refine(bp.u_xmin_, 1.0, 0);
    bp.u_xmax_ = refine(bp.u_xmax_, -1.0, 0);
    bp.bbox_ = {curve.eval(bp.u_xmin_)[0], curve.eval(bp.u_xmax_)[0], ymin, ymax};
    {
        double uy0 = 0, uy1 = 0, y0 = 1e300, y1 = -1e300;
        for (int k = 0; k < S; ++k) {
            double u = static_cast<double>(k) / S;
            double y = curve.eval(u)[1];
            if (y < y0) { y0 = y; uy0 = u; }
            if (y > y1) { y1 = y; uy1 = u; }
        }
        bp.bbox_[2] = curve.eval(refine(uy0, 1.0, 1))[1];
        bp.bbox_[3] = curve.eval(refine(uy1, -1.0, 1))[1];
    }

    // unwrapped polar angle about the origin; valid only if 0 is inside
    bp.ang_u_.resize(P + 1);
    bp.ang_tab_.resize(P + 1);
    double prev = 0;
    for (int k = 0; k <= P; ++k) {
        double u = static_cast<double>(k) / P;
        Vec2 p = curve.eval(u);
        double a = std::atan2(p[1], p[0]);
        if (k > 0) {
            while (a - prev > kPi) a -= 2 * kPi;
            while (a - prev < -kPi) a += 2 * kPi;
        }
        bp.ang_u_[k] = u;
        bp.ang_tab_[k] = a;
        prev = a;
    }
    return bp;
}

BoundaryParam arclength_reparametrize(const RawCurve& curve) { return BoundaryParam::build(curve); }

double BoundaryParam::u_of_t(double t) const {
    t -= std::floor(t);
    double s = t * length_;
    auto it = std::upper_bound(s_tab_.begin(), s_tab_.end(), s);
    std::size_t k = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - s_tab_.begin() - 1, 0), s_tab_.size() - 2);
    double u0 = u_tab_[k], u1 = u_tab_[k + 1];
    double u = u0 + (s - s_tab_[k]) / (s_tab_[k + 1] - s_tab_[k]) * (u1 - u0);
    for (int iter = 0; iter < 8; ++iter) {
        double f = s_tab_[k] + partial_length(u0, u) - s;
        double du = f / speed(u);
        u = std::clamp(u - du, u0, u1);
        if (std::abs(du) < 1e-15) break;
    }
    return u;
}

double BoundaryParam::t_of_u(double u) const {
    u -= std::floor(u);
    std::size_t P = u_tab_.size() - 1;
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(u * P), P - 1);
    return (s_tab_[k] + partial_length(u_tab_[k], u)) / length_;
}

Vec2 BoundaryParam::eval(double t) const { return curve_.eval(u_of_t(t)); }

Vec2 BoundaryParam::deriv(double t) const {
    Vec2 d = curve_.d1(u_of_t(t));
    return (length_ / norm(d)) * d;
}

Vec2 BoundaryParam::second_deriv(double t) const {
    double u = u_of_t(t);
    Vec2 a = curve_.d1(u), b = curve_.d2(u);
    double s = norm(a);
    Vec2 tprime = (1.0 / s) * b - (dot(a, b) / (s * s * s)) * a;
    return (length_ * length_ / s) * tprime;
}

double BoundaryParam::curvature(double t) const {
    double u = u_of_t(t);
    Vec2 a = curve_.d1(u), b = curve_.d2(u);
    return cross(a, b) / std::pow(norm(a), 3);
}

double BoundaryParam::u_of_angle(double theta) const {
    double a0 = ang_tab_.front(), a1 = ang_tab_.back();
    if (std::abs(a1 - a0 - 2 * kPi) > 1e-6) throw std::domain_error("polar coordinates need the origin inside the domain");
    double th = theta;
    while (th < a0) th += 2 * kPi;
    while (th >= a1) th -= 2 * kPi;
    auto it = std::upper_bound(ang_tab_.begin(), ang_tab_.end(), th);
    std::size_t k = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - ang_tab_.begin() - 1, 0), ang_tab_.size() - 2);
    double lo = ang_u_[k], hi = ang_u_[k + 1];
    Vec2 dir{std::cos(th), std::sin(th)};
    auto f = [&](double u) {
        Vec2 p = curve_.eval(u);
        return std::atan2(cross(dir, p), dot(dir, p));
    };
    double u = lo + (th - ang_tab_[k]) / (ang_tab_[k + 1] - ang_tab_[k]) * (hi - lo);
    for (int iter = 0; iter < 60; ++iter) {
        double fu = f(u);
        if (fu > 0) hi = u; else lo = u;
        Vec2 p = curve_.eval(u), dp = curve_.d1(u);
        double der = cross(p, dp) / dot(p, p);
        double un = u - fu / der;
        if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
        if (std::abs(un - u) < 1e-16) { u = un; break; }
        u = un;
    }
    return u - std::floor(u);
}

double BoundaryParam::solve_x(double target, double ua, double ub) const {
    // x(u) monotone on [ua, ub]; u may run past 1
    auto X = [&](double u) { return curve_.eval(u - std::floor(u))[0]; };
    double xa = X(ua);
    bool inc = X(ub) > xa;
    double lo = ua, hi = ub;
    double u = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        double fu = X(u) - target;
        if ((fu > 0) == inc) hi = u; else lo = u;
        double der = curve_.d1(u - std::floor(u))[0];
        double un = der != 0 ? u - fu / der : 0.5 * (lo + hi);
        if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
        if (std::abs(un - u) < 1e-16 || hi - lo < 1e-16) { u = un; break; }
        u = un;
    }
    return u - std::floor(u);
}

bool BoundaryParam::chord(double x, double& ylo, double& yhi) const {
    if (!(x > bbox_[0] && x < bbox_[1])) return false;
    double a = u_xmin_, b = u_xmax_;
    if (b < a) b += 1;
    double u1 = solve_x(x, a, b);      // lower chain (ccw from leftmost to rightmost)
    double u2 = solve_x(x, b, a + 1);  // upper chain
    ylo = curve_.eval(u1)[1];
    yhi = curve_.eval(u2)[1];
    if (ylo > yhi) std::swap(ylo, yhi);
    return true;
}

double BoundaryParam::distance(Vec2 x) const {
    silence_gsl();
    const int S = 1024;
    double best = 1e300, ub = 0;
    for (int k = 0; k < S; ++k) {
        double u = static_cast<double>(k) / S;
        double d = norm(curve_.eval(u) - x);
        if (d < best) { best = d; ub = u; }
    }
    auto f = [&](double u) { return norm(curve_.eval(u - std::floor(u)) - x); };
    gsl_function F{&gsl_call<decltype(f)>, &f};
    gsl_min_fminimizer* m = gsl_min_fminimizer_alloc(gsl_min_fminimizer_goldensection);
    double lo = ub - 1.0 / S, hi = ub + 1.0 / S;
    double fl = f(lo), fh = f(hi);
    if (best < fl && best < fh && gsl_min_fminimizer_set_with_values(m, &F, ub, best, lo, fl, hi, fh) == GSL_SUCCESS) {
        for (int iter = 0; iter < 200; ++iter) {
            gsl_min_fminimizer_iterate(m);
            double a = gsl_min_fminimizer_x_lower(m), b = gsl_min_fminimizer_x_upper(m);
            if (b - a < 1e-14) break;
        }
        best = std::min(best, gsl_min_fminimizer_f_minimum(m));
    }
    gsl_min_fminimizer_free(m);
    return best;
}

// ------------------------------------------------------------------ domain

ConvexDomain ConvexDomain::box(std::vector<double> hw) {
    ConvexDomain d;
    d.kind = DomainKind::BoxN;
    d.dim = static_cast<int>(hw.size());
    d.half_widths = std::move(hw);
    d.validate();
    return d;
}

ConvexDomain ConvexDomain::polygon(Polygon verts) {
    ConvexDomain d;
    d.kind = DomainKind::Polygon2D;
    d.dim = 2;
    d.vertices = std::move(verts);
    d.validate();
    return d;
}

ConvexDomain ConvexDomain::disc(Vec2 c, double r) {
    ConvexDomain d;
    d.kind = DomainKind::Disc2D;
    d.dim = 2;
    d.center = c;
    d.radius = r;
    d.validate();
    return d;
}

ConvexDomain ConvexDomain::smooth(const CurveSpec& spec) {
    ConvexDomain d;
    d.kind = DomainKind::SmoothCurve2D;
    d.dim = 2;
    d.curve = spec;
    d.boundary = std::make_shared<const BoundaryParam>(BoundaryParam::build(make_raw_curve(spec)));
    d.validate();
    return d;
}

ConvexDomain ConvexDomain::ellipse(double a, double b) {
    CurveSpec s;
    s.type = "ellipse";
    s.a = a;
    s.b = b;
    return smooth(s);
}

void ConvexDomain::validate() const {
    if (!(scale > 0)) throw std::invalid_argument("scale factor must be positive");
    switch (kind) {
        case DomainKind::BoxN:
            if (dim < 1 || static_cast<int>(half_widths.size()) != dim) throw std::invalid_argument("box dimension mismatch");
            for (double w : half_widths)
                if (!(w > 0)) throw std::invalid_argument("box half-widths must be positive");
            break;
        case DomainKind::Polygon2D:
            if (dim != 2) throw std::invalid_argument("polygon must be 2-D");
            if (!is_strictly_convex_ccw(vertices)) throw std::invalid_argument("polygon vertices must be strictly convex and counterclockwise");
            break;
        case DomainKind::Disc2D:
            if (dim != 2 || !(radius > 0)) throw std::invalid_argument("invalid disc");
            break;
        case DomainKind::SmoothCurve2D:
            if (dim != 2 || !boundary) throw std::invalid_argument("invalid smooth domain");
            break;
    }
}

ConvexDomain ConvexDomain::scaled(double s) const {
    ConvexDomain d = *this;
    d.scale *= s;
    d.validate();
    return d;
}

double ConvexDomain::volume() const {
    switch (kind) {
        case DomainKind::BoxN: {
            double v = 1;
            for (double w : half_widths) v *= 2 * w * scale;
            return v;
        }
        case DomainKind::Polygon2D: return signed_area(vertices) * scale * scale;
        case DomainKind::Disc2D: return kPi * radius * radius * scale * scale;
        case DomainKind::SmoothCurve2D: return boundary->area() * scale * scale;
    }
    return 0;
}

std::vector<double> ConvexDomain::bbox_lo() const {
    switch (kind) {
        case DomainKind::BoxN: {
            std::vector<double> lo(dim);
            for (int i = 0; i < dim; ++i) lo[i] = -half_widths[i] * scale;
            return lo;
        }
        case DomainKind::Polygon2D: {
            double x = 1e300, y = 1e300;
            for (auto& v : vertices) { x = std::min(x, v[0]); y = std::min(y, v[1]); }
            return {x * scale, y * scale};
        }
        case DomainKind::Disc2D: return {(center[0] - radius) * scale, (center[1] - radius) * scale};
        case DomainKind::SmoothCurve2D: {
            auto b = boundary->bbox();
            return {b[0] * scale, b[2] * scale};
        }
    }
    return {};
}

std::vector<double> ConvexDomain::bbox_hi() const {
    switch (kind) {
        case DomainKind::BoxN: {
            std::vector<double> hi(dim);
            for (int i = 0; i < dim; ++i) hi[i] = half_widths[i] * scale;
            return hi;
        }
        case DomainKind::Polygon2D: {
            double x = -1e300, y = -1e300;
            for (auto& v : vertices) { x = std::max(x, v[0]); y = std::max(y, v[1]); }
            return {x * scale, y * scale};
        }
        case DomainKind::Disc2D: return {(center[0] + radius) * scale, (center[1] + radius) * scale};
        case DomainKind::SmoothCurve2D: {
            auto b = boundary->bbox();
            return {b[1] * scale, b[3] * scale};
        }
    }
    return {};
}

double ConvexDomain::diameter() const {
    switch (kind) {
        case DomainKind::BoxN: {
            double s = 0;
            for (double w : half_widths) s += 4 * w * w;
            return std::sqrt(s) * scale;
        }
        case DomainKind::Polygon2D: {
            double best = 0;
            for (auto& a : vertices)
                for (auto& b : vertices) best = std::max(best, norm(a - b));
            return best * scale;
        }
        case DomainKind::Disc2D: return 2 * radius * scale;
        case DomainKind::SmoothCurve2D: {
            const int S = 720;
            std::vector<Vec2> p(S);
            for (int k = 0; k < S; ++k) p[k] = boundary->raw().eval(static_cast<double>(k) / S);
            double best = 0;
            for (int i = 0; i < S; ++i)
                for (int j = i + 1; j < S; ++j) best = std::max(best, norm(p[i] - p[j]));
            return best * scale;
        }
    }
    return 0;
}

bool ConvexDomain::centrally_symmetric() const {
    switch (kind) {
        case DomainKind::BoxN:
        case DomainKind::Disc2D: return true;
        case DomainKind::Polygon2D: {
            auto lo = bbox_lo(), hi = bbox_hi();
            Vec2 c{0.5 * (lo[0] + hi[0]) / scale, 0.5 * (lo[1] + hi[1]) / scale};
            double tol = 1e-12 * diameter() / scale;
            for (auto& v : vertices) {
                Vec2 w = 2.0 * c - v;
                bool found = false;
                for (auto& u : vertices) found = found || norm(u - w) <= tol;
                if (!found) return false;
            }
            return true;
        }
        case DomainKind::SmoothCurve2D: {
            auto b = boundary->bbox();
            Vec2 c{0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3])};
            double tol = 1e-9 * (b[1] - b[0]);
            for (int k = 0; k < 64; ++k) {
                Vec2 p = boundary->raw().eval((k + 0.37) / 64.0);
                if (boundary->distance(2.0 * c - p) > tol) return false;
            }
            return true;
        }
    }
    return false;
}

std::vector<double> ConvexDomain::symmetry_center() const {
    if (kind == DomainKind::BoxN) return std::vector<double>(dim, 0.0);
    if (kind == DomainKind::Disc2D) return {center[0] * scale, center[1] * scale};
    auto lo = bbox_lo(), hi = bbox_hi();
    return {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])};
}

bool contains(const ConvexDomain& d, std::span<const double> x) {
    if (static_cast<int>(x.size()) != d.dim) throw std::invalid_argument("dimension mismatch");
    const double s = d.scale;
    switch (d.kind) {
        case DomainKind::BoxN:
            for (int i = 0; i < d.dim; ++i)
                if (!(std::abs(x[i]) < d.half_widths[i] * s)) return false;
            return true;
        case DomainKind::Polygon2D: return polygon_contains(d.vertices, {x[0] / s, x[1] / s});
        case DomainKind::Disc2D: {
            double dx = x[0] / s - d.center[0], dy = x[1] / s - d.center[1];
            return dx * dx + dy * dy < d.radius * d.radius;
        }
        case DomainKind::SmoothCurve2D: {
            double lo, hi;
            if (!d.boundary->chord(x[0] / s, lo, hi)) return false;
            double y = x[1] / s;
            return y > lo && y < hi;
        }
    }
    return false;
}

namespace {

double lens_area(double R, double dist) {
    if (dist >= 2 * R) return 0.0;
    double h = dist / (2 * R);
    return 2 * R * R * std::acos(h) - 0.5 * dist * std::sqrt(4 * R * R - dist * dist);
}

double smooth_overlap(const BoundaryParam& bp, Vec2 z) {
    silence_gsl();
    auto b = bp.bbox();
    double x0 = std::max(b[0], z[0] - b[1]), x1 = std::min(b[1], z[0] - b[0]);
    if (!(x1 > x0)) return 0.0;
    auto f = [&](double X) {
        double l1, h1, l2, h2;
        if (!bp.chord(X, l1, h1) || !bp.chord(z[0] - X, l2, h2)) return 0.0;
        double lo = std::max(l1, z[1] - h2), hi = std::min(h1, z[1] - l2);
        return std::max(0.0, hi - lo);
    };
    gsl_function F{&gsl_call<decltype(f)>, &f};
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(400);
    double res = 0, err = 0;
    gsl_integration_qags(&F, x0, x1, 1e-15 * bp.area(), 1e-11, 400, ws, &res, &err);
    gsl_integration_workspace_free(ws);
    return res;
}

}  // namespace

double intersection_volume(const ConvexDomain& d, std::span<const double> x) {
    if (static_cast<int>(x.size()) != d.dim) throw std::invalid_argument("dimension mismatch");
    const double s = d.scale;
    switch (d.kind) {
        case DomainKind::BoxN: {
            double v = 1;
            for (int i = 0; i < d.dim; ++i) v *= std::max(0.0, 2 * d.half_widths[i] * s - std::abs(x[i]));
            return v;
        }
        case DomainKind::Polygon2D: {
            Vec2 z{x[0] / s, x[1] / s};
            Polygon refl(d.vertices.size());
            for (std::size_t i = 0; i < refl.size(); ++i) refl[i] = z - d.vertices[i];
            Polygon c = clip_convex(d.vertices, refl);
            return c.empty() ? 0.0 : signed_area(c) * s * s;
        }
        case DomainKind::Disc2D: {
            Vec2 z{x[0] / s - 2 * d.center[0], x[1] / s - 2 * d.center[1]};
            return lens_area(d.radius, norm(z)) * s * s;
        }
        case DomainKind::SmoothCurve2D: return smooth_overlap(*d.boundary, {x[0] / s, x[1] / s}) * s * s;
    }
    return 0;
}

VolumeEstimate intersection_volume(const ConvexDomain& d, std::span<const double> x, VolumeMethod method,
                                   long long samples, std::uint64_t seed) {
    VolumeEstimate est;
    if (method == VolumeMethod::Exact) {
        if (d.kind == DomainKind::SmoothCurve2D) throw std::invalid_argument("no closed form for smooth curves; use monte_carlo or quadrature");
        est.value = intersection_volume(d, x);
        return est;
    }
    if (method == VolumeMethod::Quadrature) {
        est.value = intersection_volume(d, x);
        return est;
    }
    if (samples <= 0) throw std::invalid_argument("sample count must be positive");
    auto lo = d.bbox_lo(), hi = d.bbox_hi();
    const int n = d.dim;
    std::vector<double> blo(n), bhi(n);
    double vb = 1;
    for (int i = 0; i < n; ++i) {
        blo[i] = std::max(lo[i], x[i] - hi[i]);
        bhi[i] = std::min(hi[i], x[i] - lo[i]);
        if (!(bhi[i] > blo[i])) return est;
        vb *= bhi[i] - blo[i];
    }
    Rng g(seed);
    std::vector<double> p(n), q(n);
    long long hits = 0;
    for (long long k = 0; k < samples; ++k) {
        for (int i = 0; i < n; ++i) {
            p[i] = uniform(g, blo[i], bhi[i]);
            q[i] = x[i] - p[i];
        }
        if (contains(d, p) && contains(d, q)) ++hits;
    }
    double ph = static_cast<double>(hits) / static_cast<double>(samples);
    est.value = vb * ph;
    est.std_error = vb * std::sqrt(ph * (1 - ph) / static_cast<double>(samples));
    est.samples = static_cast<std::size_t>(samples);
    return est;
}

double dist_to_boundary(const ConvexDomain& d, std::span<const double> x) {
    if (static_cast<int>(x.size()) != d.dim) throw std::invalid_argument("dimension mismatch");
    const double s = d.scale;
    double dist = 0;
    switch (d.kind) {
        case DomainKind::BoxN: {
            dist = 1e300;
            for (int i = 0; i < d.dim; ++i) dist = std::min(dist, d.half_widths[i] * s - std::abs(x[i]));
            if (dist < -1e-12 * d.diameter()) throw std::domain_error("point outside the domain");
            return std::max(dist, 0.0);
        }
        case DomainKind::Polygon2D:
            dist = distance_to_polygon_boundary(d.vertices, {x[0] / s, x[1] / s}) * s;
            break;
        case DomainKind::Disc2D: {
            double r = norm(Vec2{x[0] / s - d.center[0], x[1] / s - d.center[1]});
            if (r > d.radius * (1 + 1e-12)) throw std::domain_error("point outside the domain");
            return std::max(0.0, (d.radius - r) * s);
        }
        case DomainKind::SmoothCurve2D:
            dist = d.boundary->distance({x[0] / s, x[1] / s}) * s;
            break;
    }
    if (!contains(d, x) && dist > 1e-9 * d.diameter()) throw std::domain_error("point outside the domain");
    return contains(d, x) ? dist : 0.0;
}

Vec2 polar_center(const ConvexDomain& d) {
    if (d.kind == DomainKind::Disc2D) return d.scale * d.center;
    if (d.kind == DomainKind::SmoothCurve2D) return {0, 0};
    throw std::invalid_argument("polar coordinates need a disc or smooth curve");
}

Polar to_polar(const ConvexDomain& d, Vec2 x) {
    const double s = d.scale;
    if (d.kind == DomainKind::Disc2D) {
        Vec2 v = (1.0 / s) * x - d.center;
        double t = std::atan2(v[1], v[0]) / (2 * kPi);
        return {norm(v) / d.radius, t - std::floor(t)};
    }
    if (d.kind == DomainKind::SmoothCurve2D) {
        Vec2 y = (1.0 / s) * x;
        double u = d.boundary->u_of_angle(std::atan2(y[1], y[0]));
        double rho = norm(d.boundary->raw().eval(u));
        return {norm(y) / rho, d.boundary->t_of_u(u)};
    }
    throw std::invalid_argument("polar coordinates need a disc or smooth curve");
}

Vec2 from_polar(const ConvexDomain& d, double r, double t) {
    const double s = d.scale;
    if (d.kind == DomainKind::Disc2D) {
        double th = 2 * kPi * t;
        return s * (d.center + (r * d.radius) * Vec2{std::cos(th), std::sin(th)});
    }
    if (d.kind == DomainKind::SmoothCurve2D) return (s * r) * d.boundary->eval(t);
    throw std::invalid_argument("polar coordinates need a disc or smooth curve");
}

Vec2 boundary_point(const ConvexDomain& d, double t) { return from_polar(d, 1.0, t); }

Vec2 boundary_tangent(const ConvexDomain& d, double t) {
    const double s = d.scale;
    if (d.kind == DomainKind::Disc2D) {
        double th = 2 * kPi * t;
        return (s * 2 * kPi * d.radius) * Vec2{-std::sin(th), std::cos(th)};
    }
    if (d.kind == DomainKind::SmoothCurve2D) return s * d.boundary->deriv(t);
    throw std::invalid_argument("boundary tangent needs a disc or smooth curve");
}

ConvexDomain affine_image(const ConvexDomain& d, const std::array<double, 4>& M, Vec2 b) {
    if (d.dim != 2) throw std::invalid_argument("affine_image is implemented for planar domains");
    double det = M[0] * M[3] - M[1] * M[2];
    if (det == 0) throw std::invalid_argument("affine map must be invertible");
    const double s = d.scale;
    auto map_poly = [&](Polygon p) {
        for (auto& v : p) v = apply(M, s * v) + b;
        if (det < 0) std::reverse(p.begin(), p.end());
        return ConvexDomain::polygon(std::move(p));
    };
    switch (d.kind) {
        case DomainKind::BoxN: {
            double w0 = d.half_widths[0], w1 = d.half_widths[1];
            return map_poly({{-w0, -w1}, {w0, -w1}, {w0, w1}, {-w0, w1}});
        }
        case DomainKind::Polygon2D: return map_poly(d.vertices);
        case DomainKind::Disc2D: {
            CurveSpec c;
            c.type = "ellipse";
            c.a = c.b = d.radius;
            c.center = d.center;
            c.M = {M[0] * s, M[1] * s, M[2] * s, M[3] * s};
            c.offset = b;
            return ConvexDomain::smooth(c);
        }
        case DomainKind::SmoothCurve2D: {
            CurveSpec c = d.curve;
            const auto& A = c.M;
            std::array<double, 4> SA{s * A[0], s * A[1], s * A[2], s * A[3]};
            c.M = {M[0] * SA[0] + M[1] * SA[2], M[0] * SA[1] + M[1] * SA[3], M[2] * SA[0] + M[3] * SA[2],
                   M[2] * SA[1] + M[3] * SA[3]};
            c.offset = apply(M, s * c.offset) + b;
            return ConvexDomain::smooth(c);
        }
    }
    throw std::invalid_argument("unsupported domain");
}

std::vector<double> sample_inside(const ConvexDomain& d, Rng& g) {
    auto lo = d.bbox_lo(), hi = d.bbox_hi();
    std::vector<double> x(d.dim);
    for (int tries = 0; tries < 100000; ++tries) {
        for (int i = 0; i < d.dim; ++i) x[i] = uniform(g, lo[i], hi[i]);
        if (contains(d, x)) return x;
    }
    throw std::runtime_error("sample_inside: rejection sampling failed");
}

}  // namespace pwlab
