#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "pwlab/domain_io.hpp"
#include "pwlab/experiments.hpp"

using namespace pwlab;

namespace {

json disc_json() { return {{"kind", "Disc2D"}, {"dimension", 2}, {"center", {0, 0}}, {"radius", 1}}; }
json square_json() { return {{"kind", "BoxN"}, {"dimension", 2}, {"half_widths", {1, 1}}}; }

}  // namespace

TEST_CASE("config validation") {
    json ok = {{"experiment", "levelsets"}, {"seed", 1}, {"domain", disc_json()}};
    CHECK_NOTHROW(parse_config(ok));
    json no_seed = ok;
    no_seed.erase("seed");
    CHECK_THROWS_WITH(parse_config(no_seed), doctest::Contains("seed"));
    json typo = ok;
    typo["sed"] = 3;
    CHECK_THROWS_WITH(parse_config(typo), doctest::Contains("unknown key 'sed'"));
    json kind = ok;
    kind["experiment"] = "bogus";
    CHECK_THROWS(parse_config(kind));
    json fit = ok;
    fit["levelsets"] = {{"j_max", 4}, {"fit", {2, 7}}};
    CHECK_THROWS(parse_config(fit));
    json scan = {{"experiment", "schur_scan"}, {"seed", 1}, {"domain", disc_json()},
                 {"schur", {{"sigmas", {0.1}}, {"truncations", {3, 4}}}}};
    CHECK_THROWS_WITH(parse_config(scan), doctest::Contains("at least 3"));
    json p = {{"experiment", "equivalence"}, {"seed", 1}, {"domain", square_json()}, {"exponents", {{"p", 0.5}}}};
    CHECK_THROWS(parse_config(p));
}

TEST_CASE("csv header carries version and hash") {
    auto c = parse_config({{"experiment", "levelsets"}, {"seed", 1}, {"domain", disc_json()}});
    std::regex re("# pwlab [0-9.]+ config_hash=[0-9a-f]{16}\n");
    CHECK(std::regex_match(csv_header(c), re));
    auto c2 = parse_config({{"experiment", "levelsets"}, {"seed", 2}, {"domain", disc_json()}});
    CHECK(config_hash(c) != config_hash(c2));
}

TEST_CASE("equivalence sweep is deterministic and two-sided") {
    json j = {{"experiment", "equivalence"},
              {"seed", 5},
              {"domain", square_json()},
              {"decomposition", {{"j_max", 4}}},
              {"ensemble", {{"count", 4}, {"order", 2}, {"tilts", {0, 0.5}}}},
              {"exponents", {{"p", {1, 2}}}},
              {"grid", {{"h_divisor", 12}, {"refine_subsample", 2}}}};
    auto c = parse_config(j);
    auto a = run_equivalence_sweep(c), b = run_equivalence_sweep(c);
    CHECK(a.csv == b.csv);
    CHECK(a.summary == b.summary);
    for (auto& row : a.summary.at("per_p")) {
        CHECK(row.at("min").get<double>() > 0);
        CHECK(row.at("band").get<double>() >= 1);
        CHECK(row.contains("refinement_stable"));
    }
    // 2 p values x (4 symbols + 2 refined) records, after the header and column lines
    CHECK(std::count(a.csv.begin(), a.csv.end(), '\n') == 2 + 12);
}

TEST_CASE("level-set study on the square") {
    json j = {{"experiment", "levelsets"},
              {"seed", 3},
              {"domain", square_json()},
              {"a", 2},
              {"levelsets", {{"j_max", 8}, {"samples", 200000}, {"fit", {3, 8}}}}};
    auto out = run_levelset_study(parse_config(j));
    CHECK(out.summary.at("j0_measure").get<double>() > 0);
    CHECK(std::abs(out.summary.at("polytope_degree").get<double>() - 1) < 0.3);
    CHECK(out.csv.find("\n0,") != std::string::npos);
}

TEST_CASE("schur scan on the cube") {
    json j = {{"experiment", "schur_scan"},
              {"seed", 1},
              {"domain", {{"kind", "BoxN"}, {"dimension", 1}, {"half_widths", {1}}}},
              {"schur", {{"sigmas", {0, 0.1, 0.3, 0.5}}, {"truncations", {20, 25, 30}}}}};
    auto out = run_schur_scan(parse_config(j));
    auto& scan = out.summary.at("scan");
    CHECK_FALSE(scan[0].at("stable").get<bool>());
    for (int k = 1; k < 4; ++k) CHECK(scan[k].at("stable").get<bool>());
    CHECK(out.summary.at("frontier").get<double>() == doctest::Approx(0.05));
}

TEST_CASE("frontier needs a single switch from growing to stable") {
    std::vector<double> s{0.3, 0.1, 0.2};
    CHECK(scan_frontier(s, {true, false, true}) == doctest::Approx(0.15));
    CHECK(std::isnan(scan_frontier(s, {false, false, false})));
    CHECK(std::isnan(scan_frontier(s, {true, true, true})));
    CHECK(std::isnan(scan_frontier({0.1, 0.2, 0.3}, {false, true, false})));
}

TEST_CASE("admissibility: malformed decomposition gives a structured error") {
    json j = {{"experiment", "admissibility"},
              {"seed", 1},
              {"domain", disc_json()},
              {"decomposition", {{"j_max", 4}, {"m", 1}, {"epsilon", 0.4}}}};
    CHECK_THROWS_WITH(run_admissibility_report(parse_config(j)), doctest::Contains("not contained in the domain"));
    json box = {{"experiment", "admissibility"},
                {"seed", 1},
                {"domain", square_json()},
                {"decomposition", {{"j_max", 5}}},
                {"admissibility", {{"samples", 2000}}}};
    auto out = run_admissibility_report(parse_config(box));
    CHECK(out.summary.at("admissible_at_truncation").get<bool>());
}

TEST_CASE("outputs land under the output directory") {
    auto dir = std::filesystem::temp_directory_path() / "pwlab_test_out";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    json j = {{"experiment", "levelsets"},
              {"seed", 1},
              {"domain", disc_json()},
              {"levelsets", {{"j_max", 4}, {"samples", 20000}, {"fit", {1, 4}}}},
              {"output", {{"csv", "l.csv"}, {"json", "l.json"}, {"gnuplot", "l.gp"}}}};
    auto c = parse_config(j);
    write_outputs(c, run_experiment(c), dir.string());
    CHECK(std::filesystem::exists(dir / "l.csv"));
    CHECK(std::filesystem::exists(dir / "l.json"));
    CHECK(std::filesystem::exists(dir / "l.gp"));
    std::filesystem::remove_all(dir);
}
