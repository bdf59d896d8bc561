#ifndef PWLAB_HANKEL_HPP
#define PWLAB_HANKEL_HPP

#include <Eigen/Dense>
#include <vector>

#include "pwlab/symbol.hpp"
#include "pwlab/weight.hpp"

namespace pwlab {

// Cell-centred quadrature nodes of Omega. Each axis of the bounding box is split into K_d = round(width/h)
// cells, so node sums x_q + x_r fall on a lattice of spacing step_d with (2 K_d - 1) points per axis.
struct HankelGrid {
    ConvexDomain domain;
    int n = 2;
    std::vector<int> K;
    std::vector<double> lo, step;
    double cell = 1;                  // product of the steps
    std::vector<std::array<int, 2>> index;
    std::vector<double> x;            // node coordinates, n per node
    std::vector<double> weight;       // omega_{Omega/2} at the nodes

    std::size_t size() const { return index.size(); }
    std::span<const double> node(std::size_t q) const { return {x.data() + q * n, static_cast<std::size_t>(n)}; }
};

HankelGrid make_hankel_grid(const ConvexDomain& d, double h, std::uint64_t seed = 0);

// Symbol values on the node-sum lattice.
struct SumLattice {
    std::vector<int> side;
    std::vector<cplx> values;
    cplx at(const std::array<int, 2>& a, const std::array<int, 2>& b) const {
        return side.size() == 1 ? values[a[0] + b[0]]
                                : values[static_cast<std::size_t>(a[0] + b[0]) * side[1] + (a[1] + b[1])];
    }
};
SumLattice sum_lattice(const HankelGrid& g, const Symbol& f);

// M[q, r] = f(x_q + x_r) omega^sigma(x_q) omega^tau(x_r) h^n, the h^n split evenly between rows and columns.
// Complex exponents act through omega^{it} = exp(it log omega).
Eigen::MatrixXcd assemble_hankel(const HankelGrid& g, const Symbol& f, cplx sigma = 0, cplx tau = 0);
Eigen::MatrixXd assemble_hankel_real(const HankelGrid& g, const Symbol& f, double sigma = 0, double tau = 0);

// Descending singular values (LAPACK divide and conquer).
std::vector<double> singular_values(Eigen::MatrixXcd m);
// Real symmetric input: absolute eigenvalues, sorted descending.
std::vector<double> singular_values_symmetric(Eigen::MatrixXd m);
double schatten_norm(std::span<const double> sv, double p);
// Largest singular value by power iteration on M^* M.
double top_singular_value(const Eigen::MatrixXcd& m, int max_iter = 500, double tol = 1e-12);

// ||M||_{S^2}^2 summed over node pairs without forming M.
double hs_norm_squared(const HankelGrid& g, const Symbol& f, double sigma = 0, double tau = 0);
// Integral of |f|^2 m(Omega ∩ (x - Omega)) over 2 Omega by Gauss-Legendre quadrature (polar for discs).
double hs_identity_oracle(const ConvexDomain& d, const Symbol& f, int order = 192);

struct MultiplierRow {
    double p = 0, lhs = 0, rhs = 0, slack = 0;
    bool holds = false;
};
// ||f(x + y) k||_{S^p} <= ||f^vee||_{L1} ||k||_{S^p} for p in {1, 2, inf} on the grid nodes.
std::vector<MultiplierRow> schur_multiplier_check(const HankelGrid& g, const Symbol& multiplier, double multiplier_l1,
                                                  const Eigen::MatrixXd& k, double rel_slack = 1e-6);

struct ToeplitzReport {
    int N = 0;
    double norm = 0, bound = 0;
};
// Norm of (a^{-|i-k|}) on N x N, against the row-sum bound 2/(1 - 1/a) - 1.
ToeplitzReport toeplitz_norm_check(double a, int N);

}  // namespace pwlab

#endif
