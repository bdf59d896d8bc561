#ifndef PWLAB_BUMP_HPP
#define PWLAB_BUMP_HPP

#include <span>
#include <vector>

namespace pwlab {

// Fourier-side bump on (-1/2, 1/2)^n: the indicator of |u| < (1 - eps/2)/2 smoothed by the
// normalized exp(-1/(1 - t^2)) mollifier of half-width eps/4, tensorized over axes.
// Equal to 1 on |u| <= (1 - eps)/2 and to 0 for |u| >= 1/2, exactly.
class BumpProfile {
public:
    BumpProfile() = default;
    BumpProfile(double epsilon, int n);

    double epsilon() const { return eps_; }
    int dim() const { return n_; }

    double eval1d(double u) const;
    double deriv1d(double u) const;
    double eval(std::span<const double> u) const;

    // (b * b)(v) for the 1-D profile, supported in (-1, 1).
    double self_conv1d(double v) const;
    double self_conv(std::span<const double> v) const;

    // sup |b'| and the resulting bound C = max over gamma in {0,1}^n of sup |d^gamma bump|
    double deriv_sup() const { return dsup_; }
    double derivative_constant() const;
    // sqrt(C (2 pi)^n), the stated L1 bound for the space-side bump
    double l1_bound() const;

private:
    double eps_ = 0.05;
    int n_ = 1;
    double w_ = 0, rho_ = 0, dsup_ = 0;
    std::vector<double> conv_;  // self_conv1d on a uniform grid over [-1, 1]
    double conv_step_ = 0;
};

// Mollifier CDF on [-1, 1]; 0 below, 1 above.
double mollifier_cdf(double s);
double mollifier_density(double s);

}  // namespace pwlab

#endif
