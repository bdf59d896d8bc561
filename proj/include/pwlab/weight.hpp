#ifndef PWLAB_WEIGHT_HPP
#define PWLAB_WEIGHT_HPP

#include <vector>

#include "pwlab/geometry.hpp"

namespace pwlab {

// omega(x) = m(Omega ∩ (x - Omega)) / max over 2 Omega of the same.
struct WeightField {
    ConvexDomain domain;
    double normalizer = 1;
    std::vector<double> argmax;
    double base = 2;

    double eval(std::span<const double> x) const;
    double eval(Vec2 x) const { return eval(std::span<const double>(x.data(), 2)); }
    // Weight of s * Omega; omega_{s Omega}(x) = omega_Omega(x / s).
    WeightField scaled(double s) const;
};

// Default level-set base: 8 for curved planar domains, 2 otherwise.
double default_base(const ConvexDomain& d);

WeightField normalize(const ConvexDomain& d, std::uint64_t seed = 0);
WeightField normalize(const ConvexDomain& d, double base, std::uint64_t seed);

struct LevelSetReport {
    int j = 0;
    double measure = 0, std_error = 0;
    std::size_t samples = 0, hits = 0;
    double model_polytope = 0, model_curved = 0;
    bool unreliable = false;
};

// m(Delta_j) with Delta_j = {x in Omega : omega_{Omega/2}(x) in (a^{-j-1}, a^{-j})},
// j = 0..j_max, by radially stratified Monte Carlo.
std::vector<LevelSetReport> levelset_measures(const WeightField& f, int j_max, std::size_t samples, std::uint64_t seed);

struct InequalityReport {
    std::size_t trials = 0, violations = 0;
    double max_violation = 0;
    std::size_t index_violations = 0;  // sum inequality only
};

InequalityReport check_concavity(const WeightField& f, std::size_t trials, std::uint64_t seed);
InequalityReport check_sum_inequality(const WeightField& f, std::size_t trials, std::uint64_t seed);

// Level index of a weight value: j with w in (a^{-j-1}, a^{-j}].
int level_index(double w, double a);

// Grid tabulation over the bounding box of 2 Omega (planar domains or n = 1).
struct WeightGrid {
    int n_per_axis = 0, dim = 0;
    std::vector<double> lo, hi;
    std::vector<double> values;  // row-major, last axis fastest
};
WeightGrid tabulate(const WeightField& f, int n_per_axis);

}  // namespace pwlab

#endif
