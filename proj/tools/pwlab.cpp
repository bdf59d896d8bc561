#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pwlab/besov.hpp"
#include "pwlab/domain_io.hpp"
#include "pwlab/experiments.hpp"
#include "pwlab/hankel.hpp"
#include "pwlab/schur.hpp"
#include "pwlab/symbol.hpp"
#include "pwlab/weight.hpp"

using namespace pwlab;

namespace {

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_text_file(path, text);
}

std::string tool_header() { return std::string("# pwlab ") + kArtifactVersion + "\n"; }

double parse_count(const std::string& s) {
    // accepts 1e6
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !(v >= 1)) throw std::invalid_argument("bad count '" + s + "'");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Paley-Wiener Hankel operator laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kArtifactVersion);

    // weight
    std::string w_domain, w_out;
    int w_grid = 64;
    double w_a = 0;
    std::uint64_t seed = 0;
    auto* weight = app.add_subcommand("weight", "tabulate the normalized weight over the bounding box of 2 Omega");
    weight->add_option("--domain", w_domain)->required();
    weight->add_option("--grid", w_grid, "points per axis")->check(CLI::Range(2, 1 << 14));
    weight->add_option("--a", w_a, "level-set base (default: 8 for curved planar domains, else 2)");
    weight->add_option("--seed", seed);
    weight->add_option("--out", w_out, "CSV path, '-' for stdout");

    // levelsets
    std::string l_domain, l_out, l_samples = "1e6";
    int l_jmax = 8;
    double l_a = 0;
    auto* levelsets = app.add_subcommand("levelsets", "measures of the level sets of omega_{Omega/2}");
    levelsets->add_option("--domain", l_domain)->required();
    levelsets->add_option("--a", l_a);
    levelsets->add_option("--jmax", l_jmax)->check(CLI::NonNegativeNumber);
    levelsets->add_option("--samples", l_samples);
    levelsets->add_option("--seed", seed);
    levelsets->add_option("--out", l_out);

    // decompose
    std::string d_domain, d_out;
    DecompParams dp;
    std::string d_samples = "2000";
    auto* decompose_cmd = app.add_subcommand("decompose", "build the tile pairs (E, A) and measure their constants");
    decompose_cmd->add_option("--domain", d_domain)->required();
    decompose_cmd->add_option("--jmax", dp.j_max)->check(CLI::NonNegativeNumber);
    decompose_cmd->add_option("--m", dp.m)->check(CLI::NonNegativeNumber);
    decompose_cmd->add_option("--eps", dp.epsilon);
    decompose_cmd->add_option("--constants-samples", d_samples, "0 skips the measured constants");
    decompose_cmd->add_option("--seed", seed);
    decompose_cmd->add_option("--out", d_out);

    // partition
    std::string p_dec, p_out, p_report;
    double p_eps = 0.2;
    int p_grid = 256;
    bool p_squared = false;
    auto* partition_cmd = app.add_subcommand("partition", "smooth partition of unity subordinate to the A tiles");
    partition_cmd->add_option("--dec", p_dec)->required();
    partition_cmd->add_option("--eps", p_eps, "bump transition width");
    partition_cmd->add_option("--grid", p_grid)->check(CLI::Range(8, 1 << 13));
    partition_cmd->add_flag("--squared", p_squared, "the squared family on 2 Omega");
    partition_cmd->add_option("--out", p_out, "pou.bin");
    partition_cmd->add_option("--report", p_report, "CSV of per-member L1 norms and support boxes");

    // symbol
    std::string s_domain, s_out;
    int s_order = 3, s_grid = 129;
    double s_tilt = 0;
    auto* symbol_cmd = app.add_subcommand("symbol", "sample a random trigonometric symbol on 2 Omega");
    symbol_cmd->add_option("--domain", s_domain)->required();
    symbol_cmd->add_option("--order", s_order)->check(CLI::NonNegativeNumber);
    symbol_cmd->add_option("--tilt", s_tilt);
    symbol_cmd->add_option("--grid", s_grid)->check(CLI::Range(2, 1 << 12));
    symbol_cmd->add_option("--seed", seed);
    symbol_cmd->add_option("--out", s_out)->required();

    // besov
    std::string b_symbol, b_pou, b_out;
    BesovParams bp;
    auto* besov_cmd = app.add_subcommand("besov", "Besov norm of a symbol against a stored partition");
    besov_cmd->add_option("--symbol", b_symbol)->required();
    besov_cmd->add_option("--pou", b_pou)->required();
    besov_cmd->add_option("--s", bp.s);
    besov_cmd->add_option("--p", bp.p);
    besov_cmd->add_option("--q", bp.q);
    besov_cmd->add_option("--out", b_out);

    // hankel
    std::string h_domain, h_symbol, h_out;
    double h_sigma = 0, h_tau = 0, h_h = 0;
    std::vector<double> h_p{1, 2};
    auto* hankel_cmd = app.add_subcommand("hankel", "singular values and Schatten norms of the discretized operator");
    hankel_cmd->add_option("--domain", h_domain)->required();
    hankel_cmd->add_option("--symbol", h_symbol)->required();
    hankel_cmd->add_option("--sigma", h_sigma);
    hankel_cmd->add_option("--tau", h_tau);
    // -h would shadow --h, so this subcommand only takes the long help flag
    hankel_cmd->set_help_flag("--help", "Print this help message and exit");
    hankel_cmd->add_option("--h,--spacing", h_h, "quadrature spacing (default diameter/32)")->check(CLI::PositiveNumber);
    hankel_cmd->add_option("--p", h_p, "Schatten exponents; inf allowed");
    hankel_cmd->add_option("--seed", seed);
    hankel_cmd->add_option("--out", h_out);

    // schur
    std::string c_dec, c_out;
    double c_sigma = 0.2, c_tau = 0.2, c_rho = 0.4, c_gamma = 0;
    int c_jmax = -1;
    auto* schur_cmd = app.add_subcommand("schur", "weighted Schur test on the beta-index matrix");
    schur_cmd->add_option("--dec", c_dec)->required();
    schur_cmd->add_option("--sigma", c_sigma);
    schur_cmd->add_option("--tau", c_tau);
    schur_cmd->add_option("--rho", c_rho);
    schur_cmd->add_option("--gamma", c_gamma);
    schur_cmd->add_option("--jmax", c_jmax, "largest truncation (default: the decomposition's)");
    schur_cmd->add_option("--out", c_out);

    // run
    std::string r_config, r_dir = ".";
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("--config", r_config)->required();
    run->add_option("--out-dir", r_dir, "base directory for relative output paths");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*weight) {
            ConvexDomain d = load_domain(w_domain);
            WeightField f = w_a > 0 ? normalize(d, w_a, seed) : normalize(d, seed);
            WeightGrid g = tabulate(f, w_grid);
            std::ostringstream os;
            os << tool_header() << (g.dim == 1 ? "x,omega\n" : "x,y,omega\n");
            const int N = g.n_per_axis;
            for (std::size_t idx = 0; idx < g.values.size(); ++idx) {
                std::size_t rem = idx;
                std::vector<double> x(g.dim);
                for (int i = g.dim - 1; i >= 0; --i) {
                    x[i] = g.lo[i] + (g.hi[i] - g.lo[i]) * static_cast<double>(rem % N) / (N - 1);
                    rem /= N;
                }
                for (double v : x) os << fmt(v) << ',';
                os << fmt(g.values[idx]) << '\n';
            }
            emit(w_out, os.str());
        } else if (*levelsets) {
            ConvexDomain d = load_domain(l_domain);
            WeightField f = normalize(d, l_a > 0 ? l_a : default_base(d), seed);
            auto rows = levelset_measures(f, l_jmax, static_cast<std::size_t>(parse_count(l_samples)), seed);
            std::ostringstream os;
            os << tool_header() << "j,measure,std_error,samples,hits,model_polytope,model_curved,unreliable\n";
            for (auto& r : rows)
                os << r.j << ',' << fmt(r.measure) << ',' << fmt(r.std_error) << ',' << r.samples << ',' << r.hits << ','
                   << fmt(r.model_polytope) << ',' << fmt(r.model_curved) << ',' << (r.unreliable ? 1 : 0) << '\n';
            emit(l_out, os.str());
        } else if (*decompose_cmd) {
            ConvexDomain d = load_domain(d_domain);
            Decomposition dec = decompose(d, dp);
            json j = decomposition_to_json(dec);
            const std::size_t ns = static_cast<std::size_t>(std::stod(d_samples));
            if (ns > 0) j["constants"] = admissibility_report(dec, ns, seed);
            emit(d_out, j.dump(1) + "\n");
        } else if (*partition_cmd) {
            Decomposition dec = decomposition_from_json(read_json_file(p_dec));
            Partition pou(std::move(dec), p_eps, p_squared ? PouKind::Squared : PouKind::Normalized);
            if (!p_out.empty()) write_partition(p_out, pou, p_grid);
            auto chk = check_partition(pou, std::min(p_grid, 512), seed);
            std::cerr << "covered nodes " << chk.covered << ", support violations " << chk.support_violations
                      << (p_squared ? ", envelope [" + fmt(chk.envelope_min) + ", " + fmt(chk.envelope_max) + "]"
                                    : ", max |sum - 1| " + fmt(chk.max_sum_error))
                      << "\n";
            if (!p_report.empty()) {
                std::ostringstream os;
                os << tool_header() << "tile,j,complete,l1,shell,lo,hi\n";
                for (auto& r : partition_report(pou)) {
                    os << r.tile << ',' << r.j << ',' << (r.complete ? 1 : 0) << ','
                       << (r.complete ? fmt(r.l1) : std::string("nan")) << ','
                       << (r.complete ? fmt(r.shell) : std::string("nan")) << ',';
                    for (std::size_t k = 0; k < r.lo.size(); ++k) os << (k ? " " : "") << fmt(r.lo[k]);
                    os << ',';
                    for (std::size_t k = 0; k < r.hi.size(); ++k) os << (k ? " " : "") << fmt(r.hi[k]);
                    os << '\n';
                }
                emit(p_report, os.str());
            }
        } else if (*symbol_cmd) {
            ConvexDomain d = load_domain(s_domain);
            TrigSymbol f(d, s_order, s_tilt, seed);
            write_symbol(s_out, sample_symbol(f, d, s_grid));
        } else if (*besov_cmd) {
            GridSymbol f(read_symbol(b_symbol));
            Partition pou = read_partition(b_pou);
            auto r = besov_norm(f, pou, bp);
            json j = {{"version", kArtifactVersion},
                      {"s", bp.s},
                      {"p", std::isinf(bp.p) ? json("inf") : json(bp.p)},
                      {"q", std::isinf(bp.q) ? json("inf") : json(bp.q)},
                      {"value", r.value},
                      {"per_scale", r.per_scale},
                      {"max_shell", r.max_shell}};
            emit(b_out, j.dump(1) + "\n");
        } else if (*hankel_cmd) {
            ConvexDomain d = load_domain(h_domain);
            GridSymbol f(read_symbol(h_symbol));
            const double h = h_h > 0 ? h_h : d.diameter() / 32;
            HankelGrid g = make_hankel_grid(d, h, seed);
            auto sv = singular_values(assemble_hankel(g, f, h_sigma, h_tau));
            json norms = json::array();
            for (double p : h_p)
                norms.push_back({{"p", std::isinf(p) ? json("inf") : json(p)}, {"value", schatten_norm(sv, p)}});
            json j = {{"version", kArtifactVersion},
                      {"h", h},
                      {"nodes", g.size()},
                      {"sigma", h_sigma},
                      {"tau", h_tau},
                      {"schatten", norms},
                      {"hs_oracle", std::sqrt(hs_identity_oracle(d, f))},
                      {"singular_values", sv}};
            emit(h_out, j.dump(1) + "\n");
        } else if (*schur_cmd) {
            Decomposition dec = decomposition_from_json(read_json_file(c_dec));
            const int J = c_jmax < 0 ? dec.j_max : c_jmax;
            if (J < 2) throw std::invalid_argument("schur needs jmax >= 2 for three truncations");
            auto rep = schur_test(beta_histogram(dec), c_sigma, c_tau, c_rho, c_gamma, {J - 2, J - 1, J});
            json sums = json::array();
            for (auto& s : rep.sums) sums.push_back({{"j_max", s.j_max}, {"row_sup", s.row_sup}, {"col_sup", s.col_sup}});
            json j = {{"version", kArtifactVersion},
                      {"sigma", c_sigma},
                      {"tau", c_tau},
                      {"rho", c_rho},
                      {"gamma", c_gamma},
                      {"sums", sums},
                      {"row_rate", rep.row_rate},
                      {"col_rate", rep.col_rate},
                      {"verdict", rep.stable ? "stable" : "growing"}};
            emit(c_out, j.dump(1) + "\n");
        } else if (*run) {
            ExperimentConfig c = load_config(r_config);
            write_outputs(c, run_experiment(c), r_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "pwlab: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
