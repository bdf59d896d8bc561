#ifndef PWLAB_FOURIER_HPP
#define PWLAB_FOURIER_HPP

#include <functional>
#include <span>
#include <vector>

#include "pwlab/common.hpp"

namespace pwlab {

// Space-side samples of g(y) = ∫_{(-1/2,1/2)^n} G(u) e^{2 pi i y.u} du at y in (Z/P)^n, |y_k| < n_ref/2,
// from G sampled at the n_ref^n cell centres and zero-padded by the factor P. Phases are dropped,
// so only |g| is meaningful.
struct UnitTransform {
    int n = 1;
    int n_ref = 0;
    int pad = 1;
    std::vector<double> modulus;

    int length() const { return n_ref * pad; }
    // Riemann sum of |g|^p over the sampled window; p = inf gives the max.
    double lp_norm(double p) const;
    // Fraction of the L^p mass carried by the outer eighth of the window, an aliasing and truncation indicator.
    double shell_fraction(double p) const;
};

using UnitSampler = std::function<cplx(std::span<const double>)>;

UnitTransform unit_transform(int n, int n_ref, int pad, const UnitSampler& G);
// Same, from samples already laid out row-major on the n_ref^n cell centres.
UnitTransform unit_transform(int n, int n_ref, int pad, std::span<const cplx> samples);

// Cell-centre coordinate of index k on an n_ref grid over (-1/2, 1/2).
inline double unit_node(int k, int n_ref) { return -0.5 + (k + 0.5) / n_ref; }

}  // namespace pwlab

#endif
