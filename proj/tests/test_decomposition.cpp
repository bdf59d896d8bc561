#include <doctest.h>

#include <set>

#include "pwlab/decomposition.hpp"
#include "pwlab/weight.hpp"

using namespace pwlab;

namespace {

// Rejection sample from E_t through its bounding box.
bool sample_E(const Decomposition& dec, int t, Rng& g, std::vector<double>& x) {
    const Tile& T = dec.tiles[t];
    x.resize(T.e_lo.size());
    for (int k = 0; k < 10000; ++k) {
        for (std::size_t a = 0; a < x.size(); ++a) x[a] = uniform(g, T.e_lo[a], T.e_hi[a]);
        if (dec.in_tile(t, x)) return true;
    }
    return false;
}

bool in_A(const Tile& T, std::span<const double> x) {
    auto u = T.to_unit(x);
    for (double v : u)
        if (std::abs(v) >= 0.5) return false;
    return true;
}

}  // namespace

TEST_CASE("1-D cube tiles") {
    CHECK(cube_e_lo(0) == -0.5);
    CHECK(cube_e_lo(1) == 0.5);
    CHECK(cube_e_hi(1) == 0.75);
    CHECK(cube_e_lo(-2) == -0.875);
    CHECK(cube_index_1d(0.3) == 0);
    CHECK(cube_index_1d(0.5) == 1);
    CHECK(cube_index_1d(0.8) == 2);
    CHECK(cube_index_1d(-0.9) == -3);
    for (int i = -8; i <= 8; ++i) {
        CHECK(cube_a_lo(i) < cube_e_lo(i));
        CHECK(cube_e_hi(i) < cube_a_hi(i));
        CHECK(cube_index_1d(0.5 * (cube_e_lo(i) + cube_e_hi(i))) == i);
    }
}

TEST_CASE("1-D sum index agrees with brute force") {
    Rng g(1);
    for (int i = -6; i <= 6; ++i)
        for (int k = -6; k <= 6; ++k) {
            std::set<int> hit;
            for (int s = 0; s < 4000; ++s) {
                double x = uniform(g, cube_e_lo(i), cube_e_hi(i)), y = uniform(g, cube_e_lo(k), cube_e_hi(k));
                hit.insert(cube_index_1d(0.5 * (x + y)));
            }
            CHECK_MESSAGE(hit.count(beta_1d(i, k)), "i=" << i << " k=" << k);
            CHECK(beta_1d(i, k) == beta_1d(k, i));
        }
}

TEST_CASE("box decomposition structure") {
    auto dec = decompose_box(2, 5);
    CHECK(dec.counts[0] == 1);
    for (int j = 1; j <= 5; ++j) CHECK(dec.counts[j] == 4 * j);  // |i1| + |i2| = j
    double total = 0;
    for (auto& t : dec.tiles) total += t.measure;
    CHECK(total < 4);
    Rng g(2);
    std::vector<double> x;
    for (std::size_t t = 0; t < dec.size(); ++t) {
        REQUIRE(sample_E(dec, static_cast<int>(t), g, x));
        CHECK(dec.locate(x) == static_cast<int>(t));
        CHECK(in_A(dec.tiles[t], x));
        CHECK(contains(dec.domain, dec.tiles[t].a_center));
    }
    CHECK_THROWS(decompose_box(0, 3));
    CHECK_THROWS(decompose_box(2, -1));
}

TEST_CASE("disc decomposition structure") {
    const int m = 3, J = 5;
    auto dec = decompose_smooth2d(ConvexDomain::disc(), m, 0.05, J);
    CHECK(dec.a == 8);
    CHECK(dec.counts[0] == (1 << m));
    for (int j = 0; j < J; ++j) CHECK(dec.counts[j + 1] == 2 * dec.counts[j]);
    // m(E) 8^j stays within a bounded band
    double lo = 1e300, hi = 0;
    for (auto& t : dec.tiles) {
        double v = t.measure * std::pow(8.0, t.j);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi / lo <= 8);

    Rng g(3);
    std::vector<double> x;
    for (std::size_t t = 0; t < dec.size(); t += 7) {
        REQUIRE(sample_E(dec, static_cast<int>(t), g, x));
        CHECK(dec.locate(x) == static_cast<int>(t));
        if (!dec.tiles[t].a_is_ball) CHECK(in_A(dec.tiles[t], x));
    }
    // locate and in_tile agree on random points
    for (int s = 0; s < 2000; ++s) {
        auto y = sample_inside(dec.domain, g);
        int t = dec.locate(y);
        if (t >= 0) CHECK(dec.in_tile(t, y));
    }
}

TEST_CASE("truncation to j_max = 0 keeps only the angular tiles") {
    auto dec = decompose_smooth2d(ConvexDomain::disc(), 2, 0.05, 0);
    CHECK(dec.size() == 4);
    for (auto& t : dec.tiles) CHECK(t.j == 0);
}

TEST_CASE("inadmissible parameters are reported") {
    CHECK_THROWS_WITH_AS(decompose_smooth2d(ConvexDomain::disc(), 1, 0.4, 4),
                         doctest::Contains("not contained in the domain"), std::runtime_error);
    CHECK_THROWS(decompose_smooth2d(ConvexDomain::disc(), 3, 0.7, 4));
    CHECK_THROWS(decompose_smooth2d(ConvexDomain::box({1, 1}), 3, 0.05, 4));
}

TEST_CASE("polygon decomposition covers corners") {
    auto tri = ConvexDomain::polygon({{-1, -0.5}, {1, -0.5}, {0, 1}});
    auto dec = decompose_polygon2d(tri, 5);
    CHECK(dec.kind == DecKind::Polygon);
    CHECK(dec.size() > 0);
    Rng g(4);
    std::vector<double> x;
    for (std::size_t t = 0; t < dec.size(); t += 3) {
        REQUIRE(sample_E(dec, static_cast<int>(t), g, x));
        CHECK(dec.locate(x) == static_cast<int>(t));
    }
}

TEST_CASE("sum index is a tile whose doubled E meets E1 + E2") {
    auto dec = decompose_box(1, 8);
    for (std::size_t t = 0; t < dec.size(); ++t)
        for (std::size_t u = 0; u < dec.size(); ++u) {
            int b = beta_index(dec, static_cast<int>(t), static_cast<int>(u));
            const Tile &T = dec.tiles[t], &U = dec.tiles[u], &B = dec.tiles[b];
            // (E_t + E_u) / 2 meets E_b
            CHECK(0.5 * (T.e_lo[0] + U.e_lo[0]) < B.e_hi[0]);
            CHECK(B.e_lo[0] < 0.5 * (T.e_hi[0] + U.e_hi[0]));
        }
}

TEST_CASE("JSON round trip and scaling") {
    auto dec = decompose_smooth2d(ConvexDomain::disc(), 3, 0.05, 3);
    auto back = decomposition_from_json(decomposition_to_json(dec));
    REQUIRE(back.size() == dec.size());
    for (std::size_t t = 0; t < dec.size(); ++t) CHECK(back.tiles[t].measure == doctest::Approx(dec.tiles[t].measure));
    auto big = dec.scaled(2);
    CHECK(big.tiles[5].measure == doctest::Approx(4 * dec.tiles[5].measure));
}

TEST_CASE("admissibility report on a box") {
    auto rep = admissibility_report(decompose_box(1, 6), 2000, 1);
    CHECK(rep.at("admissible_at_truncation").get<bool>());
    CHECK(rep.at("truncations").size() >= 3);
}
