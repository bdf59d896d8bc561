#ifndef PWLAB_SYMBOL_HPP
#define PWLAB_SYMBOL_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pwlab/bump.hpp"
#include "pwlab/geometry.hpp"
#include "pwlab/weight.hpp"

namespace pwlab {

// Fourier-side symbol on 2 Omega.
class Symbol {
public:
    virtual ~Symbol() = default;
    virtual int dim() const = 0;
    virtual cplx eval(std::span<const double> xi) const = 0;
    virtual nlohmann::json describe() const = 0;
    // Real-valued and even under xi -> 2c - xi for some c, so Hankel matrices are real symmetric.
    virtual bool real_valued() const { return false; }
    cplx eval(Vec2 xi) const { return eval(std::span<const double>(xi.data(), 2)); }
};

using SymbolPtr = std::shared_ptr<const Symbol>;

// Trigonometric polynomial sum_{|k|_inf <= K} c_k exp(2 pi i k.(xi - lo) / L) over the bounding box
// [lo, lo + L] of 2 Omega, with i.i.d. standard complex Gaussian c_k, optionally tilted by omega_Omega^theta.
// The tilt plays the role of a per-scale factor a^{-j theta}, since omega_Omega ~ a^{-j} on the j-th level band.
class TrigSymbol : public Symbol {
public:
    TrigSymbol(const ConvexDomain& omega, int order, double tilt, std::uint64_t seed);
    int dim() const override { return n_; }
    cplx eval(std::span<const double> xi) const override;
    nlohmann::json describe() const override;
    const std::vector<cplx>& coefficients() const { return coef_; }
    double coefficient_l2() const;

private:
    int n_, order_;
    double tilt_;
    std::uint64_t seed_;
    std::vector<double> lo_, len_;
    std::vector<cplx> coef_;  // row-major over k in [-K, K]^n
    std::optional<WeightField> weight_;
};

// b(B^{-1}(xi - c)) for the base bump b; its space side has the L1 norm of the base bump for every B, c.
class BumpSymbol : public Symbol {
public:
    BumpSymbol(BumpProfile b, std::vector<double> center, std::vector<double> widths);
    int dim() const override { return b_.dim(); }
    cplx eval(std::span<const double> xi) const override;
    nlohmann::json describe() const override;
    bool real_valued() const override { return true; }

private:
    BumpProfile b_;
    std::vector<double> c_, w_;
};

// exp(2 pi i xi.z); the constant symbol is z = 0.
class PlaneWaveSymbol : public Symbol {
public:
    explicit PlaneWaveSymbol(std::vector<double> z) : z_(std::move(z)) {}
    int dim() const override { return static_cast<int>(z_.size()); }
    cplx eval(std::span<const double> xi) const override;
    nlohmann::json describe() const override;
    bool real_valued() const override;

private:
    std::vector<double> z_;
};

// Vertex-centred samples on [lo, hi] with N nodes per axis; multilinear interpolation, 0 outside the box.
struct SymbolGrid {
    int n = 2, N = 0;
    std::vector<double> lo, hi;
    std::vector<cplx> values;  // row-major, last axis fastest
    nlohmann::json source;     // how the samples were produced
};

class GridSymbol : public Symbol {
public:
    explicit GridSymbol(SymbolGrid g);
    int dim() const override { return g_.n; }
    cplx eval(std::span<const double> xi) const override;
    nlohmann::json describe() const override;
    const SymbolGrid& grid() const { return g_; }

private:
    SymbolGrid g_;
};

// Samples a symbol on the N^n vertex grid over the bounding box of 2 Omega.
SymbolGrid sample_symbol(const Symbol& s, const ConvexDomain& omega, int N);

// sym.bin: magic "PWLSYM01", u64 header length, JSON header {version, n, N, lo, hi, source}, then N^n complex
// doubles (re, im) in row-major order.
void write_symbol(const std::string& path, const SymbolGrid& g);
SymbolGrid read_symbol(const std::string& path);

}  // namespace pwlab

#endif
