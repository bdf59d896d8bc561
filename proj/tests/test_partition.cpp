#include <doctest.h>

#include <filesystem>

#include "pwlab/partition.hpp"
#include "pwlab/weight.hpp"

using namespace pwlab;

TEST_CASE("bump profile shape") {
    BumpProfile b(0.2, 1);
    CHECK(b.eval1d(0) == 1);
    CHECK(b.eval1d(0.4) == 1);  // (1 - eps) / 2
    CHECK(b.eval1d(0.5) == 0);
    CHECK(b.eval1d(-0.6) == 0);
    double prev = 1;
    for (double u = 0.4; u <= 0.5; u += 0.001) {
        double v = b.eval1d(u);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
    // derivative against central differences
    for (double u : {0.41, 0.43, 0.45, 0.47, 0.49}) {
        double fd = (b.eval1d(u + 1e-6) - b.eval1d(u - 1e-6)) / 2e-6;
        CHECK(b.deriv1d(u) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK(mollifier_cdf(-1) == 0);
    CHECK(mollifier_cdf(1) == 1);
    CHECK(mollifier_cdf(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS(BumpProfile(0, 1));
    CHECK_THROWS(BumpProfile(1.5, 1));
}

TEST_CASE("bump self-convolution against a Riemann sum") {
    BumpProfile b(0.2, 1);
    for (double v : {0.0, 0.1, 0.35, 0.62, 0.9, 0.99}) {
        const int n = 200000;
        double s = 0;
        for (int k = 0; k < n; ++k) {
            double u = -0.5 + (k + 0.5) / n;
            s += b.eval1d(u) * b.eval1d(v - u);
        }
        CHECK(std::abs(b.self_conv1d(v) - s / n) < 1e-6);
    }
    CHECK(b.self_conv1d(1.0) == 0);
    CHECK(b.self_conv1d(-1.2) == 0);
}

TEST_CASE("space-side L1 of the bump lies between sup of its transform and the derivative bound") {
    for (double eps : {0.1, 0.2, 0.4}) {
        BumpProfile b(eps, 1);
        double l1 = bump_l1_norm(b);
        CHECK(l1 >= 1);
        CHECK(l1 <= b.l1_bound());
    }
    BumpProfile b2(0.2, 2);
    CHECK(bump_l1_norm(b2) == doctest::Approx(std::pow(bump_l1_norm(BumpProfile(0.2, 1)), 2)).epsilon(1e-9));
}

TEST_CASE("triangle profile has a unit-mass nonnegative kernel") {
    // G = 1 - 2|u| is the self-convolution of an indicator; its inverse transform is a Fejer kernel of mass G(0)
    auto t = unit_transform(1, 4096, 16, [](std::span<const double> u) { return cplx(1 - 2 * std::abs(u[0])); });
    CHECK(t.lp_norm(1) == doctest::Approx(1).epsilon(0.01));
}

TEST_CASE("normalized family sums to one on covered points") {
    for (auto dec : {decompose_box(1, 6), decompose_box(2, 4), decompose_smooth2d(ConvexDomain::disc(), 3, 0.1, 3)}) {
        Partition pou(dec, 0.15);
        auto chk = check_partition(pou, 96, 1);
        CHECK(chk.covered > 0);
        CHECK(chk.max_sum_error < 1e-12);
        CHECK(chk.support_violations == 0);
        CHECK(chk.denom_min >= 1 - 1e-12);
    }
}

TEST_CASE("members vanish outside their parallelepipeds") {
    auto dec = decompose_box(2, 4);
    Partition pou(dec, 0.2);
    Rng g(7);
    for (int s = 0; s < 3000; ++s) {
        std::vector<double> xi{uniform(g, -1, 1), uniform(g, -1, 1)};
        for (int t : pou.candidates(xi)) {
            double v = pou.member(t, xi);
            CHECK(v >= 0);
            CHECK(v <= 1 + 1e-12);
            if (v > 0) {
                auto u = dec.tiles[t].to_unit(xi);
                CHECK(std::abs(u[0]) < 0.5);
                CHECK(std::abs(u[1]) < 0.5);
            }
        }
        // candidates are complete: no other member is nonzero
        double tot = 0;
        for (std::size_t t = 0; t < pou.size(); ++t) tot += pou.member(static_cast<int>(t), xi);
        CHECK(tot == doctest::Approx(pou.sum(xi)).epsilon(1e-12));
    }
}

TEST_CASE("squared family envelope is bounded above and below") {
    auto dec = decompose_box(1, 6);
    Partition sq(dec, 0.2, PouKind::Squared);
    auto chk = check_partition(sq, 4096, 2);
    CHECK(chk.envelope_min > 0.1);
    CHECK(chk.envelope_max < 10);
    CHECK(chk.support_violations == 0);
    // the member is a^j |det| (b * b) in the tile frame
    const Tile& T = dec.tiles[3];
    double xi[1] = {2 * T.a_center[0] + 0.1 * T.a_edges(0, 0)};
    double expect = std::pow(2.0, T.j) * T.a_edges(0, 0) * sq.bump().self_conv1d(0.1);
    CHECK(sq.member(3, xi) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("L1 norms of complete members do not grow with the level") {
    Partition pou(decompose_box(1, 8), 0.2);
    auto rows = partition_report(pou);
    double first = 0, last = 0;
    for (auto& r : rows) {
        if (!r.complete) continue;
        CHECK(r.shell < 1e-3);
        CHECK(r.l1 >= 1 - 1e-6);
        if (r.j == 2) first = r.l1;
        if (r.j == pou.decomposition().j_max - pou.reach()) last = r.l1;
    }
    REQUIRE(first > 0);
    CHECK(last == doctest::Approx(first).epsilon(0.05));
}

TEST_CASE("partition file round trip") {
    auto path = (std::filesystem::temp_directory_path() / "pwlab_test_pou.bin").string();
    Partition pou(decompose_box(2, 3), 0.2);
    write_partition(path, pou, 64);
    Partition back = read_partition(path);
    CHECK(back.size() == pou.size());
    std::vector<double> xi{0.3, -0.7};
    for (std::size_t t = 0; t < pou.size(); ++t)
        CHECK(back.member(static_cast<int>(t), xi) == doctest::Approx(pou.member(static_cast<int>(t), xi)));
    std::filesystem::remove(path);
}

TEST_CASE("bump wider than the tile margin is rejected") {
    CHECK_THROWS_WITH(Partition(decompose_smooth2d(ConvexDomain::disc(), 3, 0.05, 3), 0.45),
                      doctest::Contains("exceeds the tile margin"));
}
