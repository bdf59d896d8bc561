#include "pwlab/bump.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pwlab/common.hpp"

namespace pwlab {

namespace {

double raw_mollifier(double t) { return std::abs(t) < 1 ? std::exp(-1 / (1 - t * t)) : 0.0; }

// CDF table with cubic Hermite interpolation, built once.
struct CdfTable {
    static constexpr int K = 8192;
    double z = 0;
    std::vector<double> v, d;  // CDF and density times the node spacing
    CdfTable() : v(K + 1), d(K + 1) {
        gsl_integration_glfixed_table* gl = gsl_integration_glfixed_table_alloc(16);
        gsl_function f;
        f.function = [](double t, void*) { return raw_mollifier(t); };
        f.params = nullptr;
        const double h = 2.0 / K;
        v[0] = 0;
        for (int k = 0; k < K; ++k) v[k + 1] = v[k] + gsl_integration_glfixed(&f, -1 + k * h, -1 + (k + 1) * h, gl);
        gsl_integration_glfixed_table_free(gl);
        z = v[K];
        for (double& x : v) x /= z;
        v[K] = 1;
        for (int k = 0; k <= K; ++k) d[k] = raw_mollifier(-1 + k * h) / z * h;
    }
};

const CdfTable& cdf_table() {
    static const CdfTable t;
    return t;
}

}  // namespace

double mollifier_density(double s) { return raw_mollifier(s) / cdf_table().z; }

double mollifier_cdf(double s) {
    if (s <= -1) return 0;
    if (s >= 1) return 1;
    const CdfTable& T = cdf_table();
    const double h = 2.0 / CdfTable::K;
    double x = (s + 1) / h;
    int k = std::min(CdfTable::K - 1, static_cast<int>(x));
    double t = x - k;
    double y0 = T.v[k], y1 = T.v[k + 1];
    double d0 = T.d[k], d1 = T.d[k + 1];
    double t2 = t * t, t3 = t2 * t;
    // the Hermite cubic can undershoot by a few ulps near the flat ends
    double v = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * d1;
    return std::clamp(v, 0.0, 1.0);
}

BumpProfile::BumpProfile(double epsilon, int n) : eps_(epsilon), n_(n) {
    if (!(epsilon > 0 && epsilon < 0.5)) throw std::invalid_argument("bump epsilon must lie in (0, 1/2)");
    if (n < 1) throw std::invalid_argument("bump dimension must be positive");
    w_ = 0.5 * (1 - epsilon / 2);
    rho_ = epsilon / 4;
    dsup_ = mollifier_density(0) / rho_;

    // self-convolution on [-1, 1] by the trapezoid rule, which is spectrally accurate for this
    // smooth compactly supported integrand
    const int M = 2048, Q = 4096;
    conv_step_ = 2.0 / M;
    conv_.assign(M + 1, 0.0);
    std::vector<double> b(Q + 1);
    const double dq = 1.0 / Q;
    for (int k = 0; k <= Q; ++k) b[k] = eval1d(-0.5 + k * dq);
    // node m sits at -1 + 2m/M, so v - u lands on the b grid at index (2Q/M) m - k
    const int step = 2 * Q / M;
    for (int m = 0; m <= M; ++m) {
        double s = 0;
        for (int k = 0; k <= Q; ++k) {
            int r = step * m - k;
            if (r < 0 || r > Q) continue;
            s += b[k] * b[r];
        }
        conv_[m] = s * dq;
    }
}

double BumpProfile::eval1d(double u) const {
    const double a = std::abs(u);
    if (a <= w_ - rho_) return 1;
    if (a >= w_ + rho_) return 0;
    return std::max(0.0, mollifier_cdf((w_ - u) / rho_) - mollifier_cdf((-w_ - u) / rho_));
}

double BumpProfile::deriv1d(double u) const {
    return (-mollifier_density((w_ - u) / rho_) + mollifier_density((-w_ - u) / rho_)) / rho_;
}

double BumpProfile::eval(std::span<const double> u) const {
    double v = 1;
    for (double x : u) {
        if (std::abs(x) >= 0.5) return 0;
        v *= eval1d(x);
    }
    return v;
}

double BumpProfile::self_conv1d(double v) const {
    if (v <= -1 || v >= 1) return 0;
    // cubic interpolation through four neighbouring nodes
    double x = (v + 1) / conv_step_;
    int k = static_cast<int>(std::floor(x));
    const int M = static_cast<int>(conv_.size()) - 1;
    k = std::clamp(k, 1, M - 2);
    double t = x - k;
    double p0 = conv_[k - 1], p1 = conv_[k], p2 = conv_[k + 1], p3 = conv_[k + 2];
    return p1 + 0.5 * t * (p2 - p0 + t * (2 * p0 - 5 * p1 + 4 * p2 - p3 + t * (3 * (p1 - p2) + p3 - p0)));
}

double BumpProfile::self_conv(std::span<const double> v) const {
    double r = 1;
    for (double x : v) {
        if (std::abs(x) >= 1) return 0;
        r *= self_conv1d(x);
    }
    return r;
}

double BumpProfile::derivative_constant() const { return std::pow(std::max(1.0, dsup_), n_); }

double BumpProfile::l1_bound() const { return std::sqrt(derivative_constant() * std::pow(2 * kPi, n_)); }

}  // namespace pwlab
