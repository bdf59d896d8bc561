#ifndef PWLAB_EXPERIMENTS_HPP
#define PWLAB_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwlab/decomposition.hpp"
#include "pwlab/geometry.hpp"

namespace pwlab {

// Parsed experiment config. Unknown keys are rejected so that typos do not silently fall back to defaults.
struct ExperimentConfig {
    std::string kind;  // equivalence | levelsets | schur_scan | admissibility
    std::uint64_t seed = 0;
    ConvexDomain domain;
    std::optional<double> a;  // level-set base; default_base(domain) when absent
    DecompParams dec;
    double pou_epsilon = 0.2;

    // equivalence
    int symbols = 20;
    int order = 3;
    std::vector<double> tilts{0.0};
    std::vector<double> ps{2.0};
    double sigma = 0, tau = 0;
    int h_divisor = 32;  // h = diam / h_divisor
    int refine_subsample = 3;

    // levelsets
    int level_jmax = 9;
    std::size_t samples = 1000000;
    int fit_lo = 2, fit_hi = 7;

    // schur_scan
    std::vector<double> scan_sigmas;
    std::vector<double> scan_gammas;  // empty: gamma = 0 only
    std::vector<int> truncations;
    double rho_factor = 1;  // rho = rho_factor * (sigma + tau)

    // admissibility
    std::size_t admissibility_samples = 20000;

    std::string csv_path, json_path, gnuplot_path;
    nlohmann::json raw;  // as given, for the hash
};

ExperimentConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);
std::string config_hash(const ExperimentConfig& c);

struct ExperimentOutput {
    std::string csv;  // empty for experiments without records
    nlohmann::json summary;
    std::string gnuplot;
};

// "# pwlab <version> config_hash=<hex>"
std::string csv_header(const ExperimentConfig& c);

struct EquivalenceRecord {
    int symbol = 0;
    double tilt = 0, p = 0, h = 0;
    std::size_t nodes = 0;
    double besov = 0, schatten = 0, ratio = 0;
    bool refined = false;  // h/2 subsample
};

ExperimentOutput run_equivalence_sweep(const ExperimentConfig& c);
ExperimentOutput run_levelset_study(const ExperimentConfig& c);
ExperimentOutput run_schur_scan(const ExperimentConfig& c);
ExperimentOutput run_admissibility_report(const ExperimentConfig& c);
ExperimentOutput run_experiment(const ExperimentConfig& c);

// Writes csv/json/gnuplot to the configured paths, joined to out_dir when relative.
void write_outputs(const ExperimentConfig& c, const ExperimentOutput& o, const std::string& out_dir = ".");

// Midpoint between the last growing and the first stable sigma, when the verdicts switch once along the sorted
// scan; NaN otherwise.
double scan_frontier(const std::vector<double>& sigmas, const std::vector<bool>& stable);

}  // namespace pwlab

#endif
