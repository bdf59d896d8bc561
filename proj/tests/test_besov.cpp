#include <doctest.h>

#include <filesystem>

#include "pwlab/besov.hpp"

using namespace pwlab;

namespace {

// One member of a partition used as a symbol.
class MemberSymbol : public Symbol {
public:
    MemberSymbol(const Partition& p, int t) : p_(p), t_(t) {}
    int dim() const override { return p_.decomposition().domain.dim; }
    cplx eval(std::span<const double> xi) const override { return p_.member(t_, xi); }
    nlohmann::json describe() const override { return {{"kind", "member"}, {"tile", t_}}; }

private:
    const Partition& p_;
    int t_;
};

class SumSymbol : public Symbol {
public:
    SumSymbol(const Symbol& a, const Symbol& b, cplx ca, cplx cb) : a_(a), b_(b), ca_(ca), cb_(cb) {}
    int dim() const override { return a_.dim(); }
    cplx eval(std::span<const double> xi) const override { return ca_ * a_.eval(xi) + cb_ * b_.eval(xi); }
    nlohmann::json describe() const override { return {{"kind", "sum"}}; }

private:
    const Symbol &a_, &b_;
    cplx ca_, cb_;
};

}  // namespace

TEST_CASE("Parseval: transform L2 equals the Fourier-side L2") {
    auto sq = ConvexDomain::box({1, 1});
    Partition pou(decompose_box(2, 4), 0.2, PouKind::Squared);
    TrigSymbol f(sq, 3, 0, 5);
    double ps[1] = {2};
    for (int t : {0, 3, 9, 20}) {
        auto tn = tile_convolution(f, pou, t, ps);
        CHECK(tn.lp[0] == doctest::Approx(fourier_l2(f, pou, t, 512)).epsilon(1e-4));
    }
}

TEST_CASE("Besov norm is a norm") {
    auto disc = ConvexDomain::disc();
    Partition pou(decompose_smooth2d(disc, 3, 0.1, 2), 0.15, PouKind::Squared);
    TrigSymbol f(disc, 2, 0, 1), g(disc, 2, 0, 2);
    BesovParams prm{0.5, 2, 2};
    double nf = besov_norm(f, pou, prm).value, ng = besov_norm(g, pou, prm).value;
    CHECK(nf > 0);
    SumSymbol f3(f, g, cplx(0, 3), 0);
    CHECK(besov_norm(f3, pou, prm).value == doctest::Approx(3 * nf).epsilon(1e-9));
    SumSymbol fg(f, g, 1, 1);
    CHECK(besov_norm(fg, pou, prm).value <= nf + ng + 1e-9);
}

TEST_CASE("single-member symbol only sees nearby scales") {
    auto dec = decompose_box(1, 8);
    Partition on2(dec.scaled(2), 0.2);
    const int t0 = 6;  // level 3
    REQUIRE(on2.level(t0) == 3);
    MemberSymbol f(on2, t0);
    auto r = besov_norm(f, on2, {0, 2, 2});
    for (int j = 0; j <= dec.j_max; ++j) {
        if (std::abs(j - 3) > 2 * on2.reach())
            CHECK(r.per_scale[j] == 0);
    }
    CHECK(r.per_scale[3] > 0);
}

TEST_CASE("partitions on 2 Omega give equivalent norms") {
    auto dec = decompose_box(1, 7);
    Partition normalized(dec.scaled(2), 0.2), squared(dec, 0.2, PouKind::Squared);
    auto iv = ConvexDomain::box({1});
    for (double p : {1.0, 2.0})
        for (std::uint64_t s = 0; s < 4; ++s) {
            TrigSymbol f(iv, 4, 0.3 * s, s);
            double r = equivalence_ratio(f, normalized, squared, {1 / p, p, p});
            CHECK(r >= 1);
            CHECK(r < 20);
        }
}

TEST_CASE("q = infinity takes the largest scale term") {
    auto sq = ConvexDomain::box({1, 1});
    Partition pou(decompose_box(2, 3), 0.2, PouKind::Squared);
    TrigSymbol f(sq, 2, 0, 9);
    double ps[1] = {1};
    auto tiles = all_tile_norms(f, pou, ps);
    auto r = besov_from_tiles(tiles, 0, 1, std::numeric_limits<double>::infinity(), 2, 3);
    double m = 0;
    for (auto& t : tiles) m = std::max(m, std::pow(2.0, -t.j) * t.lp[0]);
    CHECK(r.value == doctest::Approx(m));
    CHECK_THROWS(besov_from_tiles(tiles, 0, 1, 0.5, 2, 3));
    double bad[1] = {0.5};
    CHECK_THROWS(tile_convolution(f, pou, 0, bad));
}

TEST_CASE("trigonometric symbols are reproducible") {
    auto d = ConvexDomain::disc();
    TrigSymbol a(d, 3, 0, 42), b(d, 3, 0, 42), c(d, 3, 0, 43);
    Vec2 x{0.3, -1.1};
    CHECK(a.eval(x) == b.eval(x));
    CHECK(a.eval(x) != c.eval(x));
    CHECK(a.coefficients().size() == 49);
    // tilt by omega^theta vanishes on the boundary of 2 Omega
    TrigSymbol t(d, 3, 0.5, 42);
    CHECK(std::abs(t.eval(Vec2{2, 0})) == 0);
}

TEST_CASE("symbol grid file round trip and interpolation") {
    auto d = ConvexDomain::box({1, 1});
    TrigSymbol f(d, 2, 0, 3);
    auto g = sample_symbol(f, d, 33);
    auto path = (std::filesystem::temp_directory_path() / "pwlab_test_sym.bin").string();
    write_symbol(path, g);
    GridSymbol back(read_symbol(path));
    std::filesystem::remove(path);
    // exact on nodes
    const double h = (g.hi[0] - g.lo[0]) / 32;
    Vec2 node{g.lo[0] + 5 * h, g.lo[1] + 17 * h};
    CHECK(std::abs(back.eval(node) - f.eval(node)) < 1e-12);
    // bilinear error is O(h^2) between nodes
    Vec2 mid{node[0] + h / 2, node[1] + h / 3};
    CHECK(std::abs(back.eval(mid) - f.eval(mid)) < 0.5 * std::abs(f.eval(mid)) + 0.5);
    CHECK(back.eval(Vec2{5, 0}) == cplx(0));
}
