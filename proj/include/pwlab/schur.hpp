#ifndef PWLAB_SCHUR_HPP
#define PWLAB_SCHUR_HPP

#include <Eigen/Dense>
#include <vector>

#include "pwlab/decomposition.hpp"

namespace pwlab {

// Dense T_{sigma,tau,rho} over the tiles with level <= j_max: a^{-j sigma} a^{-k tau} a^{beta rho}, beta the level of
// beta_index. Throws "truncation exceeded" when a beta tile lies beyond j_max.
Eigen::MatrixXd assemble_schur_matrix(const Decomposition& dec, double sigma, double tau, double rho, int j_max);

// Rows of T grouped by their partner counts over (partner level k, beta level b), over the whole decomposition.
// Tiles with equal counts give equal row and column sums for every exponent choice, so each distinct row is kept
// once. Every truncation and exponent choice is a weighted read of this table.
struct BetaHistogram {
    double a = 2;
    int J = 0;
    std::vector<int> level;              // per distinct row
    std::vector<std::size_t> multiplicity;
    std::vector<std::uint32_t> counts;   // row-major, then (J+1) x (J+1) in (k, b)
    int max_excess = 0;                  // max of beta - min(j, k) seen
    std::size_t rows() const { return level.size(); }
    std::uint32_t at(std::size_t r, int k, int b) const { return counts[(r * (J + 1) + k) * (J + 1) + b]; }
};
// Discs use their rotation symmetry (tiles of one level are rotations of each other and beta depends only on the
// radius of the centroid midpoint), so only one tile per level is paired against the finer levels; other
// decompositions pair every tile with every tile.
BetaHistogram beta_histogram(const Decomposition& dec);

struct SchurSums {
    int j_max = 0;
    double row_sup = 0;  // sup_r sum_c T[r, c] w_c / w_r
    double col_sup = 0;  // sup_c sum_r T[r, c] w_r / w_c
};

struct SchurTestReport {
    double sigma = 0, tau = 0, rho = 0, gamma = 0;
    std::vector<SchurSums> sums;
    double row_rate = 0, col_rate = 0;  // slope of ln(sup) against j_max
    bool stable = false;                // both rates <= the threshold
};

inline constexpr double kGrowthRate = 0.02;

// Schur test with the weight (j, i) -> a^{-j gamma} at each truncation in `truncations` (at least 3).
SchurTestReport schur_test(const BetaHistogram& h, double sigma, double tau, double rho, double gamma,
                           const std::vector<int>& truncations);

}  // namespace pwlab

#endif
