// One PASS/FAIL line per acceptance criterion. Exits nonzero when any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "pwlab/besov.hpp"
#include "pwlab/domain_io.hpp"
#include "pwlab/experiments.hpp"
#include "pwlab/hankel.hpp"
#include "pwlab/schur.hpp"
#include "pwlab/weight.hpp"

using namespace pwlab;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
    auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    while (!o.detail.empty() && (o.detail.back() == ' ' || o.detail.back() == ';')) o.detail.pop_back();
    bool in_time = secs <= budget_s;
    bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::printf("%s %d %s: %s [%.1fs of %.0fs%s]\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs, budget_s,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
}

std::string g6(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

ConvexDomain triangle() {
    return ConvexDomain::polygon({{-1, -0.5773502691896258}, {1, -0.5773502691896258}, {0, 1.1547005383792515}});
}

json disc_json() { return {{"kind", "Disc2D"}, {"dimension", 2}, {"center", {0, 0}}, {"radius", 1}}; }
json square_json() { return {{"kind", "BoxN"}, {"dimension", 2}, {"half_widths", {1, 1}}}; }

Outcome weight_exactness() {
    std::ostringstream os;
    bool ok = true;
    auto f = normalize(ConvexDomain::disc(), 1);
    const double closed = (2 * std::acos(0.5) - std::sqrt(3.0) / 2) / kPi;
    const double w = f.eval(Vec2{1, 0});
    ok = ok && std::abs(w - closed) <= 1e-6 && std::abs(closed - 0.39100) < 5e-6;
    double x[2] = {1, 0};
    auto mc = intersection_volume(ConvexDomain::disc(), x, VolumeMethod::MonteCarlo, 10000000, 2024);
    const double z = std::abs(mc.value / kPi - w) / (mc.std_error / kPi);
    ok = ok && z <= 3;
    os << "omega(|x|=1)=" << g6(w) << " closed=" << g6(closed) << " MC z=" << g6(z);

    auto fb = normalize(ConvexDomain::box({1, 1}), 1);
    Rng g(7);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        Vec2 p{uniform(g, -2.2, 2.2), uniform(g, -2.2, 2.2)};
        double expect = std::max(0.0, 1 - std::abs(p[0]) / 2) * std::max(0.0, 1 - std::abs(p[1]) / 2);
        worst = std::max(worst, std::abs(fb.eval(p) - expect));
    }
    ok = ok && worst <= 1e-12;
    os << "; box max err " << g6(worst) << " over 1000 probes";
    return {ok, os.str()};
}

Outcome inequalities() {
    std::ostringstream os;
    bool ok = true;
    const std::pair<const char*, ConvexDomain> doms[] = {
        {"disc", ConvexDomain::disc()}, {"square", ConvexDomain::box({1, 1})}, {"triangle", triangle()}};
    std::uint64_t seed = 100;
    for (auto& [name, d] : doms) {
        auto f = normalize(d, seed);
        auto c = check_concavity(f, 10000, seed + 1);
        auto s = check_sum_inequality(f, 10000, seed + 2);
        ok = ok && c.violations == 0 && s.violations == 0 && c.trials == 10000 && s.trials == 10000;
        os << name << " concavity " << c.violations << "/" << c.trials << " sum " << s.violations << "/" << s.trials << "; ";
        seed += 10;
    }
    return {ok, os.str()};
}

Outcome level_sets() {
    std::ostringstream os;
    auto disc = parse_config({{"experiment", "levelsets"},
                              {"seed", 31},
                              {"domain", disc_json()},
                              {"a", 8},
                              {"levelsets", {{"j_max", 8}, {"samples", 1000000}, {"fit", {2, 7}}}}});
    auto rd = run_levelset_study(disc).summary;
    const double slope = rd.at("curved_exponent").get<double>();
    const bool disc_ok = std::abs(slope / (-2.0 / 3.0) - 1) <= 0.1;
    auto sq = parse_config({{"experiment", "levelsets"},
                            {"seed", 32},
                            {"domain", square_json()},
                            {"a", 2},
                            {"levelsets", {{"j_max", 9}, {"samples", 1000000}, {"fit", {3, 9}}}}});
    auto rs = run_levelset_study(sq).summary;
    const double band = rs.at("polytope_ratio_band").get<double>();
    const bool sq_ok = band <= 4;
    os << "disc exponent " << g6(slope) << " (target -2/3 +-10%); square ratio band " << g6(band) << " (<= 4)";
    return {disc_ok && sq_ok, os.str()};
}

Outcome admissibility() {
    std::ostringstream os;
    bool ok = true;
    const std::pair<const char*, Decomposition> decs[] = {{"box n=1", decompose_box(1, 7)},
                                                          {"box n=2", decompose_box(2, 7)},
                                                          {"disc", decompose_smooth2d(ConvexDomain::disc(), 3, 0.05, 7)}};
    for (auto& [name, dec] : decs) {
        auto rep = admissibility_report(dec, 20000, 41);
        bool adm = rep.at("admissible_at_truncation").get<bool>();
        int unstable = 0;
        for (auto& [k, v] : rep.at("stable").items()) unstable += !v.get<bool>();
        ok = ok && adm && unstable == 0;
        os << name << (adm ? " admissible" : " NOT admissible") << ", unstable constants " << unstable << "; ";
    }
    const Decomposition& disc = decs[2].second;
    double lo = 1e300, hi = 0;
    for (auto& t : disc.tiles) {
        double v = t.measure * std::pow(8.0, t.j);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    ok = ok && hi / lo <= 8;
    os << "disc c2/c1 " << g6(hi / lo);
    return {ok, os.str()};
}

Outcome partition_identities() {
    std::ostringstream os;
    bool ok = true;
    struct Case {
        const char* name;
        std::function<Decomposition(int)> make;
        double eps;
        int grid, J;
    };
    const Case cases[] = {
        {"box1", [](int J) { return decompose_box(1, J); }, 0.2, 4096, 8},
        {"box2", [](int J) { return decompose_box(2, J); }, 0.2, 256, 6},
        {"disc", [](int J) { return decompose_smooth2d(ConvexDomain::disc(), 3, 0.1, J); }, 0.15, 256, 5},
    };
    for (auto& c : cases) {
        // normalized family: exact sum and flat L1
        Partition pou(c.make(c.J), c.eps);
        auto chk = check_partition(pou, c.grid, 51);
        bool sum_ok = chk.max_sum_error <= 1e-8 && chk.support_violations == 0;
        std::map<int, double> sup;
        for (auto& r : partition_report(pou))
            if (r.complete && r.j >= pou.decomposition().j0) sup[r.j] = std::max(sup[r.j], r.l1);
        std::vector<double> js, ls;
        for (auto& [j, v] : sup) {
            js.push_back(j);
            ls.push_back(std::log(v));
        }
        double slope = js.size() >= 2 ? fit_line(js, ls).slope : std::numeric_limits<double>::quiet_NaN();
        bool l1_ok = js.size() >= 2 && std::abs(slope) <= 0.05;
        // squared family: envelope floor at two truncations
        double floor4 = check_partition(Partition(c.make(4), c.eps, PouKind::Squared), c.grid, 52).envelope_min;
        double floor6 = check_partition(Partition(c.make(6), c.eps, PouKind::Squared), c.grid, 53).envelope_min;
        bool env_ok = floor4 > 0 && floor6 > 0 && std::abs(floor6 / floor4 - 1) <= 0.1;
        ok = ok && sum_ok && l1_ok && env_ok;
        os << c.name << ": |sum-1| " << g6(chk.max_sum_error) << ", L1 slope " << g6(slope) << " over "
           << js.size() << " levels, envelope floor " << g6(floor4) << "/" << g6(floor6) << "; ";
    }
    return {ok, os.str()};
}

Outcome hs_identity() {
    std::ostringstream os;
    bool ok = true;
    for (const auto& d : {ConvexDomain::disc(), ConvexDomain::box({1, 1})}) {
        auto g = make_hankel_grid(d, d.diameter() / 128, 0);
        double worst = 0;
        for (std::uint64_t s = 0; s < 5; ++s) {
            TrigSymbol f(d, 3, 0, 600 + s);
            double disc_v = hs_norm_squared(g, f), cont = hs_identity_oracle(d, f);
            worst = std::max(worst, std::abs(disc_v / cont - 1));
        }
        ok = ok && worst <= 0.02;
        os << to_string(d.kind) << " nodes " << g.size() << " max rel err " << g6(worst) << "; ";
    }
    return {ok, os.str()};
}

Outcome multiplier() {
    std::ostringstream os;
    auto d = ConvexDomain::box({1, 1});
    auto g = make_hankel_grid(d, d.diameter() / 40, 0);
    Rng r(71);
    double min_margin = 1e300;
    bool ok = true;
    for (int trial = 0; trial < 10; ++trial) {
        BumpProfile b(uniform(r, 0.1, 0.45), 2);
        BumpSymbol m(b, {uniform(r, -1, 1), uniform(r, -1, 1)}, {uniform(r, 0.5, 3), uniform(r, 0.5, 3)});
        Eigen::MatrixXd k(g.size(), g.size());
        std::normal_distribution<double> N;
        for (Eigen::Index i = 0; i < k.rows(); ++i)
            for (Eigen::Index j = 0; j <= i; ++j) k(i, j) = k(j, i) = N(r);
        for (auto& row : schur_multiplier_check(g, m, bump_l1_norm(b), k, 1e-6)) {
            ok = ok && row.holds;
            min_margin = std::min(min_margin, row.rhs / row.lhs);
        }
    }
    os << "10 pairs x p in {1,2,inf} on " << g.size() << " nodes, smallest rhs/lhs " << g6(min_margin);
    return {ok, os.str()};
}

Outcome equivalence() {
    std::ostringstream os;
    bool ok = true;
    json sq = {{"experiment", "equivalence"},
               {"seed", 81},
               {"domain", square_json()},
               {"decomposition", {{"j_max", 8}}},
               {"pou_epsilon", 0.2},
               {"ensemble", {{"count", 20}, {"order", 3}, {"tilts", {0, 0.3, 0.6}}}},
               {"exponents", {{"p", {1, 2}}}},
               {"grid", {{"h_divisor", 32}, {"refine_subsample", 3}}}};
    json disc = {{"experiment", "equivalence"},
                 {"seed", 82},
                 {"domain", disc_json()},
                 {"decomposition", {{"j_max", 4}, {"m", 3}, {"epsilon", 0.1}}},
                 {"pou_epsilon", 0.15},
                 {"ensemble", {{"count", 20}, {"order", 3}, {"tilts", {0, 0.3, 0.6}}}},
                 {"exponents", {{"p", {1, 2, 3}}}},
                 {"grid", {{"h_divisor", 32}, {"refine_subsample", 3}}}};
    for (auto* j : {&sq, &disc}) {
        auto s = run_equivalence_sweep(parse_config(*j)).summary;
        os << s.at("domain").get<std::string>() << ":";
        for (auto& row : s.at("per_p")) {
            double band = row.at("band").get<double>();
            bool ref = row.at("refinement_stable").get<bool>();
            ok = ok && band <= 50 && ref;
            os << " p=" << row.at("p").get<double>() << " band " << g6(band) << " (h/2 subsample "
               << g6(row.at("subsample_band").get<double>()) << "->" << g6(row.at("subsample_band_refined").get<double>())
               << ")";
        }
        os << "; ";
    }
    return {ok, os.str()};
}

Outcome schur_threshold() {
    std::ostringstream os;
    json gam = json::array();
    for (int k = 0; k < 20; ++k) gam.push_back(0.025 * k);
    json disc = {{"experiment", "schur_scan"},
                 {"seed", 91},
                 {"domain", disc_json()},
                 {"decomposition", {{"m", 3}, {"epsilon", 0.05}}},
                 {"schur",
                  {{"sigmas", {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35}},
                   {"gammas", gam},
                   {"truncations", {10, 11, 12, 13}}}}};
    auto sd = run_schur_scan(parse_config(disc)).summary;
    const json& fr = sd.at("frontier");
    bool disc_ok = !fr.is_null() && std::abs(fr.get<double>() - 1.0 / 6) <= 0.05;
    os << "disc frontier " << (fr.is_null() ? std::string("none") : g6(fr.get<double>())) << " (rates:";
    for (auto& r : sd.at("scan"))
        os << " " << r.at("sigma").get<double>() << "->" << g6(std::max(r.at("row_rate").get<double>(), r.at("col_rate").get<double>()));
    os << ")";

    json cube = {{"experiment", "schur_scan"},
                 {"seed", 92},
                 {"domain", {{"kind", "BoxN"}, {"dimension", 1}, {"half_widths", {1}}}},
                 {"schur", {{"sigmas", {0.1, 0.2, 0.3, 0.4, 0.5}}, {"gammas", {0}}, {"truncations", {40, 50, 60}}}}};
    auto sc = run_schur_scan(parse_config(cube)).summary;
    bool cube_ok = true;
    for (auto& r : sc.at("scan")) cube_ok = cube_ok && r.at("stable").get<bool>();
    os << "; cube sigma>=0.1 " << (cube_ok ? "all stable" : "NOT all stable");

    auto t1 = toeplitz_norm_check(2, 2048), t2 = toeplitz_norm_check(2, 4096);
    bool toe_ok = t2.norm <= 3 + 1e-12 && std::abs(t2.norm - t1.norm) <= 1e-3;
    os << "; Toeplitz N=2048 " << g6(t1.norm) << ", N=4096 " << g6(t2.norm) << " (bound " << g6(t2.bound) << ")";
    return {disc_ok && cube_ok && toe_ok, os.str()};
}

Outcome determinism() {
    std::ostringstream os;
    bool ok = true;
    const json cfgs[] = {
        {{"experiment", "levelsets"}, {"seed", 101}, {"domain", disc_json()}, {"levelsets", {{"j_max", 5}, {"samples", 100000}, {"fit", {1, 5}}}}},
        {{"experiment", "equivalence"},
         {"seed", 102},
         {"domain", square_json()},
         {"decomposition", {{"j_max", 4}}},
         {"ensemble", {{"count", 3}, {"order", 2}}},
         {"exponents", {{"p", {1, 2}}}},
         {"grid", {{"h_divisor", 12}, {"refine_subsample", 1}}}},
        {{"experiment", "schur_scan"},
         {"seed", 103},
         {"domain", disc_json()},
         {"schur", {{"sigmas", {0.1, 0.3}}, {"gammas", {0, 0.1}}, {"truncations", {4, 5, 6}}}}},
        {{"experiment", "admissibility"}, {"seed", 104}, {"domain", square_json()}, {"decomposition", {{"j_max", 5}}}, {"admissibility", {{"samples", 2000}}}},
    };
    for (auto& j : cfgs) {
        auto c = parse_config(j);
        auto a = run_experiment(c).csv, b = run_experiment(c).csv;
        bool same = a == b && !a.empty();
        ok = ok && same;
        os << c.kind << (same ? " identical" : " DIFFERS") << "; ";
    }
    return {ok, os.str()};
}

}  // namespace

int main() {
    criterion(1, "weight exactness", 60, weight_exactness);
    criterion(2, "concavity and sum inequalities", 120, inequalities);
    criterion(3, "level-set asymptotics", 300, level_sets);
    criterion(4, "admissibility constants", 600, admissibility);
    criterion(5, "partition identities", 300, partition_identities);
    criterion(6, "Hilbert-Schmidt identity", 600, hs_identity);
    criterion(7, "Schur multiplier inequality", 300, multiplier);
    criterion(8, "norm equivalence", 1800, equivalence);
    criterion(9, "Schur threshold", 600, schur_threshold);
    criterion(10, "determinism", 600, determinism);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
