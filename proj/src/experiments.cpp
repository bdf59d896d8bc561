#include "pwlab/experiments.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "pwlab/besov.hpp"
#include "pwlab/domain_io.hpp"
#include "pwlab/hankel.hpp"
#include "pwlab/schur.hpp"
#include "pwlab/symbol.hpp"
#include "pwlab/weight.hpp"

namespace pwlab {

namespace fs = std::filesystem;

namespace {

void reject_unknown(const json& j, const char* where, std::initializer_list<const char*> keys) {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw std::invalid_argument(std::string("unknown key '") + it.key() + "' in " + where);
}

template <class T>
void take(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

double as_double(const json& v) {
    // large sample counts are often written as 1e6
    if (!v.is_number()) throw std::invalid_argument("expected a number");
    return v.get<double>();
}

std::string join(const std::string& dir, const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(dir) / p).string();
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string num(double v) { return std::isfinite(v) ? fmt(v) : (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")); }

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double base_of(const ExperimentConfig& c) { return c.a ? *c.a : default_base(c.domain); }

}  // namespace

ExperimentConfig parse_config(const json& j, const std::string& base_dir) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    reject_unknown(j, "config",
                   {"experiment", "seed", "domain", "a", "decomposition", "pou_epsilon", "ensemble", "exponents", "grid",
                    "levelsets", "schur", "admissibility", "output"});
    ExperimentConfig c;
    c.raw = j;
    if (!j.contains("experiment")) throw std::invalid_argument("config needs 'experiment'");
    c.kind = j.at("experiment").get<std::string>();
    if (c.kind != "equivalence" && c.kind != "levelsets" && c.kind != "schur_scan" && c.kind != "admissibility")
        throw std::invalid_argument("unknown experiment '" + c.kind + "'");
    if (!j.contains("seed") || !j.at("seed").is_number_integer())
        throw std::invalid_argument("config needs an integer 'seed'");
    c.seed = j.at("seed").get<std::uint64_t>();

    if (!j.contains("domain")) throw std::invalid_argument("config needs 'domain'");
    const json& d = j.at("domain");
    c.domain = d.is_string() ? load_domain(join(base_dir, d.get<std::string>())) : domain_from_json(d);
    if (j.contains("a")) {
        c.a = j.at("a").get<double>();
        if (!(*c.a > 1)) throw std::invalid_argument("a must exceed 1");
    }
    if (j.contains("decomposition")) {
        const json& x = j.at("decomposition");
        reject_unknown(x, "decomposition", {"j_max", "m", "epsilon"});
        take(x, "j_max", c.dec.j_max);
        take(x, "m", c.dec.m);
        take(x, "epsilon", c.dec.epsilon);
        if (c.dec.j_max < 0 || c.dec.m < 0) throw std::invalid_argument("j_max and m must be nonnegative");
    }
    take(j, "pou_epsilon", c.pou_epsilon);
    if (!(c.pou_epsilon > 0 && c.pou_epsilon < 1)) throw std::invalid_argument("pou_epsilon must lie in (0, 1)");
    if (j.contains("ensemble")) {
        const json& x = j.at("ensemble");
        reject_unknown(x, "ensemble", {"count", "order", "tilts"});
        take(x, "count", c.symbols);
        take(x, "order", c.order);
        take(x, "tilts", c.tilts);
        if (c.symbols < 1 || c.order < 0 || c.tilts.empty()) throw std::invalid_argument("bad ensemble");
    }
    if (j.contains("exponents")) {
        const json& x = j.at("exponents");
        reject_unknown(x, "exponents", {"p", "sigma", "tau"});
        if (x.contains("p")) c.ps = x.at("p").is_array() ? x.at("p").get<std::vector<double>>()
                                                         : std::vector<double>{x.at("p").get<double>()};
        take(x, "sigma", c.sigma);
        take(x, "tau", c.tau);
        for (double p : c.ps)
            if (!(p >= 1)) throw std::invalid_argument("p must be >= 1");
    }
    if (j.contains("grid")) {
        const json& x = j.at("grid");
        reject_unknown(x, "grid", {"h_divisor", "refine_subsample"});
        take(x, "h_divisor", c.h_divisor);
        take(x, "refine_subsample", c.refine_subsample);
        if (c.h_divisor < 2 || c.refine_subsample < 0) throw std::invalid_argument("bad grid");
    }
    if (j.contains("levelsets")) {
        const json& x = j.at("levelsets");
        reject_unknown(x, "levelsets", {"j_max", "samples", "fit"});
        take(x, "j_max", c.level_jmax);
        if (x.contains("samples")) c.samples = static_cast<std::size_t>(as_double(x.at("samples")));
        if (x.contains("fit")) {
            auto f = x.at("fit").get<std::vector<int>>();
            if (f.size() != 2 || f[0] >= f[1]) throw std::invalid_argument("levelsets.fit must be [lo, hi] with lo < hi");
            c.fit_lo = f[0];
            c.fit_hi = f[1];
        }
        if (c.fit_hi > c.level_jmax) throw std::invalid_argument("levelsets.fit exceeds j_max");
    }
    if (j.contains("schur")) {
        const json& x = j.at("schur");
        reject_unknown(x, "schur", {"sigmas", "gammas", "truncations", "rho_factor"});
        take(x, "sigmas", c.scan_sigmas);
        take(x, "gammas", c.scan_gammas);
        take(x, "truncations", c.truncations);
        take(x, "rho_factor", c.rho_factor);
    }
    if (c.kind == "schur_scan") {
        if (c.scan_sigmas.empty()) throw std::invalid_argument("schur.sigmas is empty");
        if (c.truncations.size() < 3) throw std::invalid_argument("schur.truncations needs at least 3 entries");
    }
    if (j.contains("admissibility")) {
        const json& x = j.at("admissibility");
        reject_unknown(x, "admissibility", {"samples"});
        if (x.contains("samples")) c.admissibility_samples = static_cast<std::size_t>(as_double(x.at("samples")));
    }
    if (j.contains("output")) {
        const json& x = j.at("output");
        reject_unknown(x, "output", {"csv", "json", "gnuplot"});
        take(x, "csv", c.csv_path);
        take(x, "json", c.json_path);
        take(x, "gnuplot", c.gnuplot_path);
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    return parse_config(read_json_file(path), fs::path(path).parent_path().string());
}

std::string config_hash(const ExperimentConfig& c) { return hex64(fnv1a(c.raw.dump())); }

std::string csv_header(const ExperimentConfig& c) {
    return std::string("# pwlab ") + kArtifactVersion + " config_hash=" + config_hash(c) + "\n";
}

ExperimentOutput run_equivalence_sweep(const ExperimentConfig& c) {
    const std::string stage_prefix = "equivalence: ";
    const ConvexDomain& D = c.domain;
    Decomposition dec;
    try {
        dec = decompose(D, c.dec);
    } catch (const std::exception& e) {
        throw std::runtime_error(stage_prefix + "decomposition failed: " + e.what());
    }
    // The squared family lives on 2 Omega and generates the same Besov space as any partition there.
    Partition pou(dec, c.pou_epsilon, PouKind::Squared);
    const double h = D.diameter() / c.h_divisor;
    HankelGrid grid = make_hankel_grid(D, h, c.seed), fine;
    if (c.refine_subsample > 0) fine = make_hankel_grid(D, h / 2, c.seed);

    std::vector<EquivalenceRecord> recs;
    for (int i = 0; i < c.symbols; ++i) {
        const double tilt = c.tilts[i % c.tilts.size()];
        TrigSymbol f(D, c.order, tilt, split_seed(c.seed, i));
        std::vector<TileNorms> tiles;
        try {
            tiles = all_tile_norms(f, pou, c.ps);
        } catch (const std::exception& e) {
            throw std::runtime_error(stage_prefix + "besov stage, symbol " + std::to_string(i) + ": " + e.what());
        }
        auto schatten = [&](const HankelGrid& g) {
            try {
                return singular_values(assemble_hankel(g, f, c.sigma, c.tau));
            } catch (const std::exception& e) {
                throw std::runtime_error(stage_prefix + "hankel stage, symbol " + std::to_string(i) + ": " + e.what());
            }
        };
        auto sv = schatten(grid);
        std::vector<double> sv2;
        const bool refine = i < c.refine_subsample;
        if (refine) sv2 = schatten(fine);
        for (std::size_t k = 0; k < c.ps.size(); ++k) {
            const double p = c.ps[k];
            const double s = c.sigma + c.tau + 1 / p;
            const double b = besov_from_tiles(tiles, k, s, p, dec.a, dec.j_max).value;
            for (int pass = 0; pass < (refine ? 2 : 1); ++pass) {
                EquivalenceRecord r;
                r.symbol = i;
                r.tilt = tilt;
                r.p = p;
                r.refined = pass == 1;
                r.h = pass ? h / 2 : h;
                r.nodes = pass ? fine.size() : grid.size();
                r.besov = b;
                r.schatten = schatten_norm(pass ? sv2 : sv, p);
                if (!(r.besov > 0 && r.schatten > 0))
                    throw std::runtime_error(stage_prefix + "nonpositive norm for symbol " + std::to_string(i));
                r.ratio = r.besov / r.schatten;
                recs.push_back(r);
            }
        }
    }

    ExperimentOutput out;
    std::ostringstream csv;
    csv << csv_header(c) << "symbol,tilt,p,h,nodes,besov,schatten,ratio,refined\n";
    for (auto& r : recs)
        csv << r.symbol << ',' << fmt(r.tilt) << ',' << fmt(r.p) << ',' << fmt(r.h) << ',' << r.nodes << ','
            << fmt(r.besov) << ',' << fmt(r.schatten) << ',' << fmt(r.ratio) << ',' << (r.refined ? 1 : 0) << '\n';
    out.csv = csv.str();

    json per_p = json::array();
    for (double p : c.ps) {
        std::vector<double> all, sub, sub_fine;
        std::map<double, std::vector<double>> by_tilt;
        for (auto& r : recs) {
            if (r.p != p) continue;
            if (r.refined) {
                sub_fine.push_back(r.ratio);
                continue;
            }
            all.push_back(r.ratio);
            by_tilt[r.tilt].push_back(r.ratio);
            if (r.symbol < c.refine_subsample) sub.push_back(r.ratio);
        }
        auto [mn, mx] = std::minmax_element(all.begin(), all.end());
        json row = {{"p", p},
                    {"s", c.sigma + c.tau + 1 / p},
                    {"min", *mn},
                    {"max", *mx},
                    {"median", median(all)},
                    {"band", *mx / *mn}};
        if (!sub.empty()) {
            auto band = [](const std::vector<double>& v) {
                auto [a, b] = std::minmax_element(v.begin(), v.end());
                return *b / *a;
            };
            const double b0 = band(sub), b1 = band(sub_fine);
            row["subsample_band"] = b0;
            row["subsample_band_refined"] = b1;
            // stable: the refined band is no wider than the coarse one up to 10%
            row["refinement_stable"] = b1 <= 1.1 * b0;
        }
        json tilts = json::array();
        for (auto& [t, v] : by_tilt) tilts.push_back({{"tilt", t}, {"median", median(v)}});
        row["median_by_tilt"] = tilts;
        per_p.push_back(row);
    }
    out.summary = {{"experiment", "equivalence"},
                   {"version", kArtifactVersion},
                   {"config_hash", config_hash(c)},
                   {"domain", to_string(D.kind)},
                   {"j_max", dec.j_max},
                   {"tiles", dec.size()},
                   {"h", h},
                   {"nodes", grid.size()},
                   {"nodes_refined", fine.size()},
                   {"symbols", c.symbols},
                   {"per_p", per_p}};
    if (!c.csv_path.empty()) {
        std::ostringstream gp;
        gp << "set datafile separator ','\nset logscale y\nset xlabel 'symbol'\nset ylabel 'besov / schatten'\n"
           << "plot '" << fs::path(c.csv_path).filename().string()
           << "' every ::2 using 1:($9 == 0 ? $8 : 1/0):3 with points palette title 'ratio (color: p)'\n";
        out.gnuplot = gp.str();
    }
    return out;
}

ExperimentOutput run_levelset_study(const ExperimentConfig& c) {
    const double a = base_of(c);
    WeightField f = normalize(c.domain, a, c.seed);
    auto rows = levelset_measures(f, c.level_jmax, c.samples, c.seed);
    const int n = c.domain.dim;

    ExperimentOutput out;
    std::ostringstream csv;
    csv << csv_header(c) << "j,measure,std_error,samples,hits,model_polytope,model_curved,unreliable\n";
    for (auto& r : rows)
        csv << r.j << ',' << fmt(r.measure) << ',' << fmt(r.std_error) << ',' << r.samples << ',' << r.hits << ','
            << fmt(r.model_polytope) << ',' << fmt(r.model_curved) << ',' << (r.unreliable ? 1 : 0) << '\n';
    out.csv = csv.str();

    std::vector<double> js, loga, logj, logscaled, ratio;
    bool any_unreliable = false;
    for (auto& r : rows) {
        if (r.j < c.fit_lo || r.j > c.fit_hi) continue;
        if (!(r.measure > 0)) throw std::runtime_error("levelsets: empty level set j=" + std::to_string(r.j));
        any_unreliable = any_unreliable || r.unreliable;
        js.push_back(r.j);
        loga.push_back(std::log(r.measure) / std::log(a));
        logj.push_back(std::log(static_cast<double>(r.j)));
        logscaled.push_back(std::log(r.measure * std::pow(a, r.j)));
        ratio.push_back(r.measure / r.model_polytope);
    }
    const double curved = fit_line(js, loga).slope;
    const double degree = fit_line(logj, logscaled).slope;
    auto [rmin, rmax] = std::minmax_element(ratio.begin(), ratio.end());
    out.summary = {{"experiment", "levelsets"},
                   {"version", kArtifactVersion},
                   {"config_hash", config_hash(c)},
                   {"domain", to_string(c.domain.kind)},
                   {"a", a},
                   {"fit", {c.fit_lo, c.fit_hi}},
                   {"curved_exponent", curved},
                   {"curved_model", -2.0 / (n + 1)},
                   {"polytope_degree", degree},
                   {"polytope_model", n - 1},
                   {"polytope_ratio_band", *rmax / *rmin},
                   {"unreliable_in_fit", any_unreliable},
                   {"j0_measure", rows.front().measure}};
    if (!c.csv_path.empty()) {
        std::ostringstream gp;
        gp << "set datafile separator ','\nset logscale y\nset xlabel 'j'\nset ylabel 'measure'\n"
           << "plot '" << fs::path(c.csv_path).filename().string()
           << "' every ::2 using 1:2 with linespoints title 'level set', '' every ::2 using 1:7 with lines title "
              "'curved model'\n";
        out.gnuplot = gp.str();
    }
    return out;
}

ExperimentOutput run_schur_scan(const ExperimentConfig& c) {
    const int J = *std::max_element(c.truncations.begin(), c.truncations.end());
    DecompParams dp = c.dec;
    dp.j_max = J;
    BetaHistogram hist = beta_histogram(decompose(c.domain, dp));
    const std::vector<double> gammas = c.scan_gammas.empty() ? std::vector<double>{0.0} : c.scan_gammas;

    std::vector<SchurTestReport> best;
    std::vector<bool> verdict;
    for (double s : c.scan_sigmas) {
        // the weight exponent is free; keep the one with the slowest growth
        SchurTestReport b;
        double score = std::numeric_limits<double>::infinity();
        for (double g : gammas) {
            auto r = schur_test(hist, s, s, c.rho_factor * 2 * s, g, c.truncations);
            const double m = std::max(r.row_rate, r.col_rate);
            if (m < score) {
                score = m;
                b = r;
            }
        }
        best.push_back(b);
        verdict.push_back(b.stable);
    }

    ExperimentOutput out;
    std::ostringstream csv;
    csv << csv_header(c) << "sigma,tau,rho,gamma,j_max,row_sup,col_sup,row_rate,col_rate,verdict\n";
    for (auto& r : best)
        for (auto& s : r.sums)
            csv << fmt(r.sigma) << ',' << fmt(r.tau) << ',' << fmt(r.rho) << ',' << fmt(r.gamma) << ',' << s.j_max << ','
                << fmt(s.row_sup) << ',' << fmt(s.col_sup) << ',' << fmt(r.row_rate) << ',' << fmt(r.col_rate) << ','
                << (r.stable ? "stable" : "growing") << '\n';
    out.csv = csv.str();

    json rows = json::array();
    for (auto& r : best)
        rows.push_back({{"sigma", r.sigma},
                        {"gamma", r.gamma},
                        {"row_rate", r.row_rate},
                        {"col_rate", r.col_rate},
                        {"stable", r.stable}});
    out.summary = {{"experiment", "schur_scan"},
                   {"version", kArtifactVersion},
                   {"config_hash", config_hash(c)},
                   {"domain", to_string(c.domain.kind)},
                   {"a", hist.a},
                   {"truncations", c.truncations},
                   {"distinct_rows", hist.rows()},
                   {"growth_threshold", kGrowthRate},
                   {"scan", rows},
                   {"frontier", jnum(scan_frontier(c.scan_sigmas, verdict))}};
    return out;
}

ExperimentOutput run_admissibility_report(const ExperimentConfig& c) {
    Decomposition dec;
    try {
        dec = decompose(c.domain, c.dec);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("admissibility: decomposition failed: ") + e.what());
    }
    ExperimentOutput out;
    out.summary = admissibility_report(dec, c.admissibility_samples, c.seed);
    out.summary["experiment"] = "admissibility";
    out.summary["version"] = kArtifactVersion;
    out.summary["config_hash"] = config_hash(c);
    std::ostringstream csv;
    csv << csv_header(c) << "j_max,c1,c2,M_E,C_sum,M1,C_G,M_A,C_overlap,epsilon_prime,A_outside,C_image\n";
    for (auto& r : out.summary.at("truncations")) {
        csv << r.at("j_max").get<int>();
        for (const char* k : {"c1", "c2", "M_E", "C_sum", "M1", "C_G", "M_A", "C_overlap", "epsilon_prime"})
            csv << ',' << (r.at(k).is_null() ? std::string("nan") : num(r.at(k).get<double>()));
        csv << ',' << r.at("A_outside").get<long long>() << ','
            << (r.at("C_image").is_null() ? std::string("nan") : num(r.at("C_image").get<double>())) << '\n';
    }
    out.csv = csv.str();
    return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& c) {
    if (c.kind == "equivalence") return run_equivalence_sweep(c);
    if (c.kind == "levelsets") return run_levelset_study(c);
    if (c.kind == "schur_scan") return run_schur_scan(c);
    return run_admissibility_report(c);
}

void write_outputs(const ExperimentConfig& c, const ExperimentOutput& o, const std::string& out_dir) {
    if (!c.csv_path.empty() && !o.csv.empty()) write_text_file(join(out_dir, c.csv_path), o.csv);
    if (!c.json_path.empty()) write_text_file(join(out_dir, c.json_path), o.summary.dump(2) + "\n");
    if (!c.gnuplot_path.empty() && !o.gnuplot.empty()) write_text_file(join(out_dir, c.gnuplot_path), o.gnuplot);
}

double scan_frontier(const std::vector<double>& sigmas, const std::vector<bool>& stable) {
    if (sigmas.size() != stable.size()) throw std::invalid_argument("scan_frontier: size mismatch");
    std::vector<std::size_t> order(sigmas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigmas[x] < sigmas[y]; });
    int flips = 0;
    std::size_t at = 0;
    for (std::size_t k = 1; k < order.size(); ++k)
        if (stable[order[k]] != stable[order[k - 1]]) {
            ++flips;
            at = k;
        }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (flips != 1 || stable[order[0]]) return nan;
    return 0.5 * (sigmas[order[at - 1]] + sigmas[order[at]]);
}

}  // namespace pwlab
