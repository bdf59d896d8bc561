#include <doctest.h>

#include "pwlab/hankel.hpp"
#include "pwlab/partition.hpp"
#include "pwlab/schur.hpp"

using namespace pwlab;

TEST_CASE("grid nodes lie in the domain on a sum lattice") {
    auto d = ConvexDomain::disc();
    auto g = make_hankel_grid(d, 0.1, 0);
    CHECK(g.size() > 250);
    CHECK(g.size() < 330);  // about pi / h^2
    for (std::size_t q = 0; q < g.size(); ++q) {
        CHECK(contains(d, g.node(q)));
        CHECK(g.weight[q] > 0);
    }
    CHECK_THROWS(make_hankel_grid(d, 0, 0));
}

TEST_CASE("Hilbert-Schmidt norm matches the weighted integral") {
    for (const auto& d : {ConvexDomain::box({1, 1}), ConvexDomain::disc()}) {
        auto g = make_hankel_grid(d, d.diameter() / 48, 0);
        TrigSymbol f(d, 2, 0, 7);
        double hs = hs_norm_squared(g, f);
        CHECK(hs == doctest::Approx(hs_identity_oracle(d, f)).epsilon(0.02));
        auto M = assemble_hankel(g, f);
        CHECK(M.squaredNorm() == doctest::Approx(hs).epsilon(1e-10));
    }
}

TEST_CASE("constant symbol gives a rank-one operator") {
    auto d = ConvexDomain::box({1, 1});
    auto g = make_hankel_grid(d, 0.1, 0);
    PlaneWaveSymbol one({0, 0});
    auto sv = singular_values(assemble_hankel(g, one));
    CHECK(sv[0] == doctest::Approx(g.cell * g.size()));  // the rank-one value is the sum of the cell weights
    CHECK(sv[1] < 1e-10 * sv[0]);
    CHECK(schatten_norm(sv, 1) == doctest::Approx(sv[0]));
}

TEST_CASE("singular values against an independent solver") {
    auto d = ConvexDomain::disc();
    auto g = make_hankel_grid(d, 0.2, 0);
    TrigSymbol f(d, 2, 0, 3);
    auto M = assemble_hankel(g, f, 0.3, 0.1);
    auto sv = singular_values(M);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    auto ref = svd.singularValues();
    REQUIRE(sv.size() == static_cast<std::size_t>(ref.size()));
    for (std::size_t k = 0; k < sv.size(); ++k) CHECK(sv[k] == doctest::Approx(ref[k]).epsilon(1e-9).scale(ref[0]));
    CHECK(top_singular_value(M) == doctest::Approx(sv[0]).epsilon(1e-8));
    double s2 = 0;
    for (double v : sv) s2 += v * v;
    CHECK(schatten_norm(sv, 2) == doctest::Approx(std::sqrt(s2)));
    CHECK(schatten_norm(sv, std::numeric_limits<double>::infinity()) == sv[0]);
    CHECK_THROWS(schatten_norm(sv, 0.5));
}

TEST_CASE("real even symbols give symmetric matrices") {
    auto d = ConvexDomain::box({1, 1});
    auto g = make_hankel_grid(d, 0.15, 0);
    BumpSymbol b(BumpProfile(0.2, 2), {0, 0}, {1.5, 1.5});
    REQUIRE(b.real_valued());
    auto R = assemble_hankel_real(g, b);
    CHECK((R - R.transpose()).norm() < 1e-14);
    auto s1 = singular_values_symmetric(R);
    auto s2 = singular_values(assemble_hankel(g, b));
    for (std::size_t k = 0; k < 10; ++k) CHECK(s1[k] == doctest::Approx(s2[k]).epsilon(1e-9).scale(s2[0]));
    CHECK_THROWS(assemble_hankel_real(g, TrigSymbol(d, 1, 0, 1)));
}

TEST_CASE("imaginary weight exponents are unitary") {
    auto d = ConvexDomain::disc();
    auto g = make_hankel_grid(d, 0.2, 0);
    TrigSymbol f(d, 2, 0, 4);
    auto a = singular_values(assemble_hankel(g, f));
    auto b = singular_values(assemble_hankel(g, f, cplx(0, 1.3), cplx(0, -0.4)));
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(b[k] == doctest::Approx(a[k]).epsilon(1e-10).scale(a[0]));
}

TEST_CASE("multiplier inequality on a bump") {
    auto d = ConvexDomain::box({1, 1});
    auto g = make_hankel_grid(d, 0.12, 0);
    BumpProfile b(0.2, 2);
    BumpSymbol m(b, {0.2, -0.1}, {1.0, 2.0});
    Rng r(3);
    Eigen::MatrixXd k(g.size(), g.size());
    for (Eigen::Index i = 0; i < k.rows(); ++i)
        for (Eigen::Index j = 0; j <= i; ++j) k(i, j) = k(j, i) = std::normal_distribution<double>()(r);
    auto rows = schur_multiplier_check(g, m, bump_l1_norm(b), k);
    REQUIRE(rows.size() == 3);
    for (auto& row : rows) CHECK(row.holds);
}

TEST_CASE("Toeplitz norm stays below the row-sum bound") {
    double prev = 0;
    for (int N : {16, 64, 256, 1024}) {
        auto rep = toeplitz_norm_check(2, N);
        CHECK(rep.bound == doctest::Approx(3));
        CHECK(rep.norm <= rep.bound + 1e-12);
        CHECK(rep.norm >= prev - 1e-12);
        prev = rep.norm;
    }
    CHECK(prev > 2.99);
}

TEST_CASE("Schur sums from the histogram equal dense row sums") {
    for (const auto& dec : {decompose_box(2, 5), decompose_smooth2d(ConvexDomain::disc(), 3, 0.05, 4)}) {
        auto h = beta_histogram(dec);
        const double s = 0.2, t = 0.3, rho = 0.45, gam = 0.1;
        auto rep = schur_test(h, s, t, rho, gam, {2, 3, 4});
        for (auto& sums : rep.sums) {
            auto T = assemble_schur_matrix(dec, s, t, rho, sums.j_max);
            std::vector<double> w;
            for (auto& tile : dec.tiles)
                if (tile.j <= sums.j_max) w.push_back(std::pow(dec.a, -tile.j * gam));
            Eigen::Map<Eigen::VectorXd> W(w.data(), w.size());
            Eigen::VectorXd row = (T * W).cwiseQuotient(W), col = (T.transpose() * W).cwiseQuotient(W);
            CHECK(sums.row_sup == doctest::Approx(row.maxCoeff()).epsilon(1e-12));
            CHECK(sums.col_sup == doctest::Approx(col.maxCoeff()).epsilon(1e-12));
        }
    }
}

TEST_CASE("cube Schur test: linear growth without decay, bounded with it") {
    auto h = beta_histogram(decompose_box(1, 40));
    auto flat = schur_test(h, 0, 0, 0, 0, {20, 30, 40});
    CHECK_FALSE(flat.stable);
    // row sums grow by the number of tiles per level
    double d1 = flat.sums[1].row_sup - flat.sums[0].row_sup, d2 = flat.sums[2].row_sup - flat.sums[1].row_sup;
    CHECK(d1 == doctest::Approx(d2));
    for (double s : {0.1, 0.3, 0.5}) CHECK(schur_test(h, s, s, 2 * s, 0, {20, 30, 40}).stable);
}

TEST_CASE("disc Schur test below the threshold grows for every weight") {
    auto h = beta_histogram(decompose_smooth2d(ConvexDomain::disc(), 3, 0.05, 7));
    for (int k = 0; k < 20; ++k) {
        auto r = schur_test(h, 0.1, 0.1, 0.2, 0.025 * k, {5, 6, 7});
        CHECK(std::max(r.row_rate, r.col_rate) > 0);
    }
}

TEST_CASE("disc Schur sums above the threshold have shrinking increments") {
    auto h = beta_histogram(decompose_smooth2d(ConvexDomain::disc(), 3, 0.05, 10));
    auto r = schur_test(h, 0.35, 0.35, 0.7, 0.175, {7, 8, 9, 10});
    for (std::size_t k = 2; k < r.sums.size(); ++k) {
        double a = r.sums[k - 1].row_sup - r.sums[k - 2].row_sup, b = r.sums[k].row_sup - r.sums[k - 1].row_sup;
        CHECK(b < a);
    }
    CHECK(h.max_excess <= 0);
}
