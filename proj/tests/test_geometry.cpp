#include <doctest.h>

#include "pwlab/domain_io.hpp"
#include "pwlab/geometry.hpp"

using namespace pwlab;

namespace {

double lens(double r, double d) {
    // area of two radius-r discs at distance d
    if (d >= 2 * r) return 0;
    return 2 * r * r * std::acos(d / (2 * r)) - 0.5 * d * std::sqrt(4 * r * r - d * d);
}

ConvexDomain triangle() {
    return ConvexDomain::polygon({{-1, -0.5773502691896258}, {1, -0.5773502691896258}, {0, 1.1547005383792515}});
}

}  // namespace

TEST_CASE("polygon primitives") {
    Polygon sq{{0, 0}, {2, 0}, {2, 1}, {0, 1}};
    CHECK(signed_area(sq) == doctest::Approx(2));
    auto c = centroid(sq);
    CHECK(c[0] == doctest::Approx(1));
    CHECK(c[1] == doctest::Approx(0.5));
    CHECK(is_strictly_convex_ccw(sq));
    Polygon cw(sq.rbegin(), sq.rend());
    CHECK_FALSE(is_strictly_convex_ccw(cw));
    CHECK(polygon_contains(sq, {1, 0.5}));
    CHECK_FALSE(polygon_contains(sq, {2, 0.5}));  // open set

    Polygon shifted = translated(sq, {1, 0.5});
    CHECK(signed_area(clip_convex(sq, shifted)) == doctest::Approx(0.5));
    CHECK(signed_area(clip_convex(sq, translated(sq, {5, 0}))) == doctest::Approx(0));

    auto hull = convex_hull({{0, 0}, {1, 0}, {2, 0}, {1, 1}, {1, 0.2}});
    CHECK(hull.size() == 3);
    // Minkowski sum of a square with itself is the doubled square
    CHECK(signed_area(minkowski_sum(sq, sq)) == doctest::Approx(8));
    CHECK(convex_intersect(sq, shifted));
    CHECK_FALSE(convex_intersect(sq, translated(sq, {2, 0}), 1e-12));
    CHECK(distance_to_polygon_boundary(sq, {1, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("clipping area matches Monte Carlo on random convex pairs") {
    Rng g(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec2> a, b;
        for (int k = 0; k < 8; ++k) {
            a.push_back({uniform(g, -1, 1), uniform(g, -1, 1)});
            b.push_back({uniform(g, -0.5, 1.5), uniform(g, -1, 1)});
        }
        Polygon A = convex_hull(a), B = convex_hull(b);
        double exact = std::abs(signed_area(clip_convex(A, B)));
        const int n = 200000;
        int hits = 0;
        for (int s = 0; s < n; ++s) {
            Vec2 x{uniform(g, -1, 1.5), uniform(g, -1, 1)};
            hits += polygon_contains(A, x) && polygon_contains(B, x);
        }
        double est = 5.0 * hits / n, se = 5.0 * std::sqrt(hits * (1 - double(hits) / n)) / n;
        CHECK(std::abs(est - exact) <= 4 * se + 1e-12);
    }
}

TEST_CASE("domain construction and validation") {
    CHECK_THROWS(ConvexDomain::polygon({{0, 0}, {1, 1}, {1, 0}}));  // clockwise
    CHECK_THROWS(ConvexDomain::box({1, -1}));
    CHECK_THROWS(ConvexDomain::disc({0, 0}, 0));
    CHECK_THROWS(ConvexDomain::ellipse(1, 0));
    auto d = ConvexDomain::disc();
    CHECK(d.volume() == doctest::Approx(kPi));
    CHECK(d.scaled(3).volume() == doctest::Approx(9 * kPi));
    CHECK(ConvexDomain::box({1, 2, 3}).volume() == doctest::Approx(48));
    CHECK(triangle().volume() == doctest::Approx(std::sqrt(3.0)));
    CHECK(ConvexDomain::box({1, 1}).diameter() == doctest::Approx(2 * std::sqrt(2.0)));
    CHECK(ConvexDomain::box({1, 1}).centrally_symmetric());
    CHECK_FALSE(triangle().centrally_symmetric());
}

TEST_CASE("smooth boundary parametrization") {
    auto e = ConvexDomain::ellipse(1.5, 1);
    CHECK(e.volume() == doctest::Approx(kPi * 1.5).epsilon(1e-6));
    // Ramanujan's perimeter approximation is accurate to ~1e-8 at this eccentricity
    double a = 1.5, b = 1, hh = (a - b) * (a - b) / ((a + b) * (a + b));
    double L = kPi * (a + b) * (1 + 3 * hh / (10 + std::sqrt(4 - 3 * hh)));
    CHECK(e.boundary->total_length() == doctest::Approx(L).epsilon(1e-7));
    auto [kmin, kmax] = e.boundary->curvature_bounds();
    CHECK(kmin == doctest::Approx(b / (a * a)).epsilon(1e-4));
    CHECK(kmax == doctest::Approx(a / (b * b)).epsilon(1e-4));
    for (double t : {0.0, 0.13, 0.5, 0.77}) {
        Vec2 p = boundary_point(e, t);
        CHECK(p[0] * p[0] / (a * a) + p[1] * p[1] == doctest::Approx(1).epsilon(1e-9));
        CHECK(norm(boundary_tangent(e, t)) == doctest::Approx(e.boundary->total_length()).epsilon(1e-6));
    }
    Polar q = to_polar(e, {0.3, 0.2});
    Vec2 back = from_polar(e, q.r, q.t);
    CHECK(back[0] == doctest::Approx(0.3));
    CHECK(back[1] == doctest::Approx(0.2));
}

TEST_CASE("intersection volume closed forms") {
    auto d = ConvexDomain::disc();
    for (double r : {0.0, 0.5, 1.0, 1.7, 1.99, 2.0, 2.5}) {
        double x[2] = {r, 0};
        CHECK(intersection_volume(d, x) == doctest::Approx(lens(1, r)).epsilon(1e-12));
    }
    auto box = ConvexDomain::box({1, 0.5});
    Rng g(3);
    for (int k = 0; k < 100; ++k) {
        double x[2] = {uniform(g, -2, 2), uniform(g, -1, 1)};
        double expect = std::max(0.0, 2 - std::abs(x[0])) * std::max(0.0, 1 - std::abs(x[1]));
        CHECK(intersection_volume(box, x) == doctest::Approx(expect).epsilon(1e-12));
    }
    // polygon: Omega ∩ (x - Omega) by clipping against Monte Carlo
    auto tri = triangle();
    double x[2] = {0.3, -0.2};
    auto mc = intersection_volume(tri, x, VolumeMethod::MonteCarlo, 400000, 9);
    CHECK(std::abs(mc.value - intersection_volume(tri, x)) < 4 * mc.std_error);
    // smooth: chord quadrature against Monte Carlo
    auto e = ConvexDomain::ellipse(1.5, 1);
    double y[2] = {0.8, 0.4};
    auto mce = intersection_volume(e, y, VolumeMethod::MonteCarlo, 400000, 10);
    CHECK(std::abs(mce.value - intersection_volume(e, y)) < 4 * mce.std_error);
    CHECK(intersection_volume(e, y, VolumeMethod::Quadrature).value ==
          doctest::Approx(intersection_volume(e, y)).epsilon(1e-9));
}

TEST_CASE("distance and containment") {
    auto d = ConvexDomain::disc({1, 2}, 2);
    double x[2] = {1.5, 2};
    CHECK(dist_to_boundary(d, x) == doctest::Approx(1.5));
    CHECK(contains(d, Vec2{2.9, 2}));
    CHECK_FALSE(contains(d, Vec2{3.0, 2}));
    double out[2] = {9, 9};
    CHECK_THROWS_AS(dist_to_boundary(d, out), std::domain_error);
    auto sq = ConvexDomain::box({1, 1});
    double y[2] = {0.25, -0.5};
    CHECK(dist_to_boundary(sq, y) == doctest::Approx(0.5));
}

TEST_CASE("affine images scale volume by the determinant") {
    auto sq = ConvexDomain::box({1, 1});
    auto img = affine_image(sq, {2, 1, 0, 1}, {0.5, 0});
    CHECK(img.kind == DomainKind::Polygon2D);
    CHECK(img.volume() == doctest::Approx(8));
    auto disc = affine_image(ConvexDomain::disc(), {2, 0, 0, 0.5}, {0, 0});
    CHECK(disc.kind == DomainKind::SmoothCurve2D);
    CHECK(disc.volume() == doctest::Approx(kPi).epsilon(1e-6));
}

TEST_CASE("domain JSON round trip") {
    for (const auto& d : {ConvexDomain::disc({0.5, 0}, 2), ConvexDomain::box({1, 2}), triangle(),
                          ConvexDomain::ellipse(1.5, 1).scaled(2)}) {
        auto back = domain_from_json(domain_to_json(d));
        CHECK(back.kind == d.kind);
        CHECK(back.volume() == doctest::Approx(d.volume()).epsilon(1e-9));
    }
    CHECK_THROWS(domain_from_json(json{{"kind", "Disc2D"}, {"dimension", 3}, {"radius", 1}}));
    CHECK_THROWS(domain_from_json(json{{"kind", "Blob"}}));
}

TEST_CASE("uniform samples stay inside") {
    Rng g(4);
    auto tri = triangle();
    for (int k = 0; k < 1000; ++k) CHECK(contains(tri, sample_inside(tri, g)));
}
