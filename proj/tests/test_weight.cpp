#include <doctest.h>

#include "pwlab/weight.hpp"

using namespace pwlab;

TEST_CASE("disc weight closed form and Monte Carlo oracle") {
    auto f = normalize(ConvexDomain::disc(), 1);
    const double expect = (2 * std::acos(0.5) - std::sqrt(3.0) / 2) / kPi;
    CHECK(f.eval(Vec2{1, 0}) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(f.eval(Vec2{0, 0}) == doctest::Approx(1));
    CHECK(f.eval(Vec2{2, 0}) == 0);
    CHECK(f.eval(Vec2{3, 1}) == 0);

    // hit-or-miss on the lens, independent of the closed form
    Rng g(99);
    const int n = 400000;
    int hits = 0;
    for (int k = 0; k < n; ++k) {
        Vec2 y{uniform(g, -1, 1), uniform(g, -1, 1)};
        hits += dot(y, y) < 1 && dot(Vec2{1, 0} - y, Vec2{1, 0} - y) < 1;
    }
    double est = 4.0 * hits / n / kPi, se = 4.0 * std::sqrt(hits * (1 - double(hits) / n)) / n / kPi;
    CHECK(std::abs(est - expect) < 4 * se);
}

TEST_CASE("box weight is the product formula") {
    auto f = normalize(ConvexDomain::box({1, 2}), 1);
    Rng g(5);
    for (int k = 0; k < 200; ++k) {
        Vec2 x{uniform(g, -2.5, 2.5), uniform(g, -4.5, 4.5)};
        double expect = std::max(0.0, 1 - std::abs(x[0]) / 2) * std::max(0.0, 1 - std::abs(x[1]) / 4);
        CHECK(f.eval(x) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("weight of a dilate") {
    auto tri = ConvexDomain::polygon({{-1, -0.5}, {1, -0.5}, {0, 1}});
    auto f = normalize(tri, 2);
    auto f3 = f.scaled(3);
    auto direct = normalize(tri.scaled(3), 2);
    Rng g(6);
    for (int k = 0; k < 50; ++k) {
        Vec2 x{uniform(g, -3, 3), uniform(g, -3, 3)};
        CHECK(f3.eval(x) == doctest::Approx(f.eval(Vec2{x[0] / 3, x[1] / 3})).epsilon(1e-12));
        CHECK(direct.eval(x) == doctest::Approx(f3.eval(x)).epsilon(1e-9));
    }
}

TEST_CASE("weight is bounded by 1 and maximal at the argmax") {
    auto tri = ConvexDomain::polygon({{-1, -0.5}, {1, -0.5}, {0, 1}});
    auto f = normalize(tri, 4);
    CHECK(f.eval(f.argmax) == doctest::Approx(1).epsilon(1e-9));
    Rng g(8);
    for (int k = 0; k < 500; ++k) {
        Vec2 x{uniform(g, -2, 2), uniform(g, -1, 2)};
        double w = f.eval(x);
        CHECK(w >= 0);
        CHECK(w <= 1 + 1e-12);
    }
}

TEST_CASE("concavity and sum inequality hold") {
    for (const auto& d : {ConvexDomain::disc(), ConvexDomain::box({1, 1}),
                          ConvexDomain::polygon({{-1, -0.5}, {1, -0.5}, {0, 1}})}) {
        auto f = normalize(d, 12);
        auto c = check_concavity(f, 2000, 1);
        CHECK(c.violations == 0);
        CHECK(c.trials == 2000);
        CHECK(check_sum_inequality(f, 2000, 2).violations == 0);
    }
    // smooth boundaries go through chord quadrature, which is slow
    auto e = normalize(ConvexDomain::ellipse(1.5, 1), 12);
    CHECK(check_concavity(e, 50, 1).violations == 0);
    CHECK(check_sum_inequality(e, 50, 2).violations == 0);
}

TEST_CASE("level index") {
    CHECK(level_index(1.0, 2) == 0);
    CHECK(level_index(0.6, 2) == 0);
    CHECK(level_index(0.5, 2) == 1);  // (a^{-2}, a^{-1}]
    CHECK(level_index(0.3, 2) == 1);
    CHECK(level_index(0.01, 8) == 2);
}

TEST_CASE("interval level sets are exact halvings") {
    // on (-1, 1) the weight of the half-interval is 1 - |x|, so m(Delta_j) = 2^{-j}
    auto f = normalize(ConvexDomain::box({1}), 2, 0);
    auto rows = levelset_measures(f, 6, 200000, 4);
    REQUIRE(rows.size() == 7);
    for (auto& r : rows) {
        double expect = std::pow(2.0, -r.j);
        CHECK(std::abs(r.measure - expect) <= 4 * r.std_error + 1e-12);
        CHECK(r.model_polytope == doctest::Approx(expect));
    }
}

TEST_CASE("level sets are disjoint pieces of the domain") {
    auto f = normalize(ConvexDomain::disc(), 2, 0);
    auto rows = levelset_measures(f, 8, 100000, 5);
    double total = 0, se2 = 0;
    for (auto& r : rows) {
        CHECK(r.measure >= 0);
        total += r.measure;
        se2 += r.std_error * r.std_error;
    }
    CHECK(rows[0].measure > 0);
    CHECK(total <= kPi + 4 * std::sqrt(se2));
    CHECK_THROWS(levelset_measures(f, -1, 10, 0));
}

TEST_CASE("tabulation covers 2 Omega") {
    auto f = normalize(ConvexDomain::disc(), 8);
    auto g = tabulate(f, 21);
    CHECK(g.values.size() == 21 * 21);
    CHECK(g.lo[0] == doctest::Approx(-2));
    CHECK(g.values[10 * 21 + 10] == doctest::Approx(1));
    CHECK(g.values[0] == 0);
    CHECK_THROWS(tabulate(f, 1));
}
