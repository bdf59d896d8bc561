#include "pwlab/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace pwlab {

namespace {

// In-place complex plans keyed by (dimension, length); FFTW plans are reused for every tile.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [k, e] : plans_) {
            fftw_destroy_plan(e.plan);
            fftw_free(e.buf);
        }
    }
    fftw_complex* buffer(int n, int L) { return get(n, L).buf; }
    void execute(int n, int L) { fftw_execute(get(n, L).plan); }

private:
    struct Entry {
        fftw_plan plan;
        fftw_complex* buf;
    };
    Entry& get(int n, int L) {
        auto key = std::make_pair(n, L);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::size_t total = 1;
        for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(L);
        Entry e;
        e.buf = fftw_alloc_complex(total);
        std::vector<int> dims(n, L);
        e.plan = fftw_plan_dft(n, dims.data(), e.buf, e.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        return plans_.emplace(key, e).first->second;
    }
    std::map<std::pair<int, int>, Entry> plans_;
};

PlanCache& plans() {
    static PlanCache c;
    return c;
}

UnitTransform run(int n, int n_ref, int pad, const std::function<cplx(const int*)>& sample) {
    if (n < 1 || n > 2) throw std::invalid_argument("unit transforms support n = 1, 2");
    if (n_ref < 2 || pad < 1) throw std::invalid_argument("bad transform size");
    const int L = n_ref * pad;
    std::size_t total = n == 1 ? L : static_cast<std::size_t>(L) * L;
    fftw_complex* buf = plans().buffer(n, L);
    for (std::size_t k = 0; k < total; ++k) buf[k][0] = buf[k][1] = 0;
    const double w = std::pow(1.0 / n_ref, n);
    int idx[2] = {0, 0};
    if (n == 1) {
        for (idx[0] = 0; idx[0] < n_ref; ++idx[0]) {
            cplx v = sample(idx) * w;
            buf[idx[0]][0] = v.real();
            buf[idx[0]][1] = v.imag();
        }
    } else {
        for (idx[0] = 0; idx[0] < n_ref; ++idx[0])
            for (idx[1] = 0; idx[1] < n_ref; ++idx[1]) {
                cplx v = sample(idx) * w;
                std::size_t k = static_cast<std::size_t>(idx[0]) * L + idx[1];
                buf[k][0] = v.real();
                buf[k][1] = v.imag();
            }
    }
    plans().execute(n, L);
    UnitTransform out;
    out.n = n;
    out.n_ref = n_ref;
    out.pad = pad;
    out.modulus.resize(total);
    for (std::size_t k = 0; k < total; ++k) out.modulus[k] = std::hypot(buf[k][0], buf[k][1]);
    return out;
}

}  // namespace

UnitTransform unit_transform(int n, int n_ref, int pad, const UnitSampler& G) {
    double u[2];
    return run(n, n_ref, pad, [&](const int* idx) {
        for (int d = 0; d < n; ++d) u[d] = unit_node(idx[d], n_ref);
        return G(std::span<const double>(u, n));
    });
}

UnitTransform unit_transform(int n, int n_ref, int pad, std::span<const cplx> samples) {
    return run(n, n_ref, pad, [&](const int* idx) {
        std::size_t k = n == 1 ? idx[0] : static_cast<std::size_t>(idx[0]) * n_ref + idx[1];
        return samples[k];
    });
}

double UnitTransform::lp_norm(double p) const {
    const double cell = std::pow(1.0 / pad, n);
    if (std::isinf(p)) {
        double m = 0;
        for (double v : modulus) m = std::max(m, v);
        return m;
    }
    double s = 0;
    if (p == 1)
        for (double v : modulus) s += v;
    else if (p == 2)
        for (double v : modulus) s += v * v;
    else
        for (double v : modulus) s += std::pow(v, p);
    return std::pow(s * cell, 1 / p);
}

double UnitTransform::shell_fraction(double p) const {
    const int L = length();
    const int edge = L / 2 - L / 16;  // |k| beyond this is the outer eighth of the half-window
    auto wrapped = [L](int k) { return std::abs(k < L / 2 ? k : k - L); };
    double all = 0, outer = 0;
    const double pp = std::isinf(p) ? 1 : p;
    if (n == 1) {
        for (int k = 0; k < L; ++k) {
            double v = std::pow(modulus[k], pp);
            all += v;
            if (wrapped(k) >= edge) outer += v;
        }
    } else {
        for (int a = 0; a < L; ++a)
            for (int b = 0; b < L; ++b) {
                double v = std::pow(modulus[static_cast<std::size_t>(a) * L + b], pp);
                all += v;
                if (std::max(wrapped(a), wrapped(b)) >= edge) outer += v;
            }
    }
    return all > 0 ? outer / all : 0.0;
}

}  // namespace pwlab
