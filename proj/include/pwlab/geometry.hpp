#ifndef PWLAB_GEOMETRY_HPP
#define PWLAB_GEOMETRY_HPP

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "pwlab/common.hpp"
#include "pwlab/polygon.hpp"

namespace pwlab {

enum class DomainKind { BoxN, Polygon2D, Disc2D, SmoothCurve2D };

std::string to_string(DomainKind k);
DomainKind domain_kind_from_string(const std::string& s);

// A closed, counterclockwise curve c(u), u in [0,1], with two derivatives.
struct RawCurve {
    std::function<Vec2(double)> eval, d1, d2;
};

// Serializable description of a smooth boundary. The base curve is an
// ellipse or a radial Fourier series around `center`; the affine map
// x -> M x + offset is applied afterwards.
struct CurveSpec {
    std::string type = "ellipse";  // "ellipse" | "radial_fourier"
    double a = 1, b = 1, rotation = 0;
    Vec2 center{0, 0};
    double r0 = 1;
    std::vector<double> cos_coef, sin_coef;  // k = 1, 2, ...
    std::array<double, 4> M{1, 0, 0, 1};     // row-major
    Vec2 offset{0, 0};
};

RawCurve make_raw_curve(const CurveSpec& spec);

// Arc-length view of a closed convex curve: gamma(t), t in [0,1], with
// |gamma'(t)| = total_length. Also carries the polar/chord helpers the
// smooth-domain code needs.
class BoundaryParam {
public:
    BoundaryParam() = default;
    static BoundaryParam build(const RawCurve& curve, int panels = 1024);

    double total_length() const { return length_; }
    Vec2 eval(double t) const;
    Vec2 deriv(double t) const;
    Vec2 second_deriv(double t) const;
    double curvature(double t) const;
    std::pair<double, double> curvature_bounds() const { return {kmin_, kmax_}; }

    // raw parameter <-> arc-length fraction
    double u_of_t(double t) const;
    double t_of_u(double u) const;

    // Ray from the origin at angle theta hits the curve at raw parameter u.
    double u_of_angle(double theta) const;
    double area() const { return area_; }
    std::array<double, 4> bbox() const { return bbox_; }  // xmin, xmax, ymin, ymax
    // Vertical chord {y : (x, y) inside}; false if x misses the domain.
    bool chord(double x, double& ylo, double& yhi) const;
    double distance(Vec2 x) const;
    const RawCurve& raw() const { return curve_; }

private:
    RawCurve curve_;
    double length_ = 0, area_ = 0, kmin_ = 0, kmax_ = 0;
    std::vector<double> u_tab_, s_tab_;      // cumulative length on panel edges
    std::vector<double> ang_u_, ang_tab_;    // unwrapped polar angle table
    std::array<double, 4> bbox_{};
    double u_xmin_ = 0, u_xmax_ = 0;
    double speed(double u) const;
    double partial_length(double u0, double u1) const;
    double solve_x(double target, double ua, double ub) const;
};

BoundaryParam arclength_reparametrize(const RawCurve& curve);

struct ConvexDomain {
    DomainKind kind = DomainKind::BoxN;
    int dim = 2;
    double scale = 1.0;  // the set is scale * (base set), dilation about 0
    std::vector<double> half_widths;  // BoxN, centered at 0
    Polygon vertices;                 // Polygon2D
    Vec2 center{0, 0};                // Disc2D
    double radius = 1;                // Disc2D
    CurveSpec curve;                  // SmoothCurve2D
    std::shared_ptr<const BoundaryParam> boundary;

    static ConvexDomain box(std::vector<double> half_widths);
    static ConvexDomain polygon(Polygon verts);
    static ConvexDomain disc(Vec2 c = {0, 0}, double r = 1);
    static ConvexDomain smooth(const CurveSpec& spec);
    static ConvexDomain ellipse(double a, double b);

    ConvexDomain scaled(double s) const;
    double volume() const;
    std::vector<double> bbox_lo() const;
    std::vector<double> bbox_hi() const;
    double diameter() const;
    bool centrally_symmetric() const;
    std::vector<double> symmetry_center() const;  // valid when centrally symmetric
    void validate() const;
};

bool contains(const ConvexDomain& d, std::span<const double> x);
inline bool contains(const ConvexDomain& d, Vec2 x) { return contains(d, std::span<const double>(x.data(), 2)); }

enum class VolumeMethod { Exact, MonteCarlo, Quadrature };

struct VolumeEstimate {
    double value = 0;
    double std_error = 0;
    std::size_t samples = 0;
};

// m(Omega ∩ (x - Omega)).
VolumeEstimate intersection_volume(const ConvexDomain& d, std::span<const double> x, VolumeMethod method,
                                   long long samples = 0, std::uint64_t seed = 0);
// Deterministic value: closed forms, or chord quadrature for smooth curves.
double intersection_volume(const ConvexDomain& d, std::span<const double> x);

double dist_to_boundary(const ConvexDomain& d, std::span<const double> x);

// Polar coordinates x = c + r (gamma(t) - c) for discs and smooth curves;
// c is the disc center, or the origin for smooth curves.
struct Polar {
    double r = 0, t = 0;
};
Vec2 polar_center(const ConvexDomain& d);
Polar to_polar(const ConvexDomain& d, Vec2 x);
Vec2 from_polar(const ConvexDomain& d, double r, double t);
Vec2 boundary_point(const ConvexDomain& d, double t);
Vec2 boundary_tangent(const ConvexDomain& d, double t);  // gamma'(t)

// Image under x -> M x + b (2-D, det M != 0). Boxes become polygons, discs
// become smooth curves.
ConvexDomain affine_image(const ConvexDomain& d, const std::array<double, 4>& M, Vec2 b);

// Uniform sample from the bounding box until it hits the domain.
std::vector<double> sample_inside(const ConvexDomain& d, Rng& g);

}  // namespace pwlab

#endif
