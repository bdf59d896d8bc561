#include "pwlab/symbol.hpp"

#include <cstring>
#include <fstream>

namespace pwlab {

TrigSymbol::TrigSymbol(const ConvexDomain& omega, int order, double tilt, std::uint64_t seed)
    : n_(omega.dim), order_(order), tilt_(tilt), seed_(seed) {
    if (order < 0) throw std::invalid_argument("symbol order must be nonnegative");
    if (n_ > 2) throw std::invalid_argument("symbols support n <= 2");
    ConvexDomain dbl = omega.scaled(2);
    lo_ = dbl.bbox_lo();
    auto hi = dbl.bbox_hi();
    for (int k = 0; k < n_; ++k) len_.push_back(hi[k] - lo_[k]);
    const int side = 2 * order + 1;
    const std::size_t count = n_ == 1 ? side : static_cast<std::size_t>(side) * side;
    Rng g(seed);
    std::normal_distribution<double> z(0.0, std::sqrt(0.5));
    coef_.resize(count);
    for (auto& c : coef_) {
        double re = z(g);
        c = cplx(re, z(g));
    }
    if (tilt != 0) weight_ = normalize(omega, seed);
}

cplx TrigSymbol::eval(std::span<const double> xi) const {
    const int side = 2 * order_ + 1;
    // e_k = w^k built by repeated multiplication from w^{-K}
    cplx e[2][64];
    for (int d = 0; d < n_; ++d) {
        double t = 2 * kPi * (xi[d] - lo_[d]) / len_[d];
        cplx w(std::cos(t), std::sin(t));
        cplx p = std::pow(w, -order_);
        for (int k = 0; k < side; ++k, p *= w) e[d][k] = p;
    }
    cplx s = 0;
    if (n_ == 1) {
        for (int k = 0; k < side; ++k) s += coef_[k] * e[0][k];
    } else {
        for (int a = 0; a < side; ++a) {
            cplx row = 0;
            for (int b = 0; b < side; ++b) row += coef_[a * side + b] * e[1][b];
            s += row * e[0][a];
        }
    }
    if (weight_) {
        double w = weight_->eval(xi);
        s *= w > 0 ? std::pow(w, tilt_) : 0.0;
    }
    return s;
}

double TrigSymbol::coefficient_l2() const {
    double s = 0;
    for (auto& c : coef_) s += std::norm(c);
    return std::sqrt(s);
}

nlohmann::json TrigSymbol::describe() const {
    return {{"kind", "trig"}, {"order", order_}, {"tilt", tilt_}, {"seed", seed_}};
}

BumpSymbol::BumpSymbol(BumpProfile b, std::vector<double> center, std::vector<double> widths)
    : b_(std::move(b)), c_(std::move(center)), w_(std::move(widths)) {
    if (static_cast<int>(c_.size()) != b_.dim() || static_cast<int>(w_.size()) != b_.dim())
        throw std::invalid_argument("bump symbol dimension mismatch");
}

cplx BumpSymbol::eval(std::span<const double> xi) const {
    double u[8];
    for (int k = 0; k < b_.dim(); ++k) u[k] = (xi[k] - c_[k]) / w_[k];
    return b_.eval(std::span<const double>(u, b_.dim()));
}

nlohmann::json BumpSymbol::describe() const {
    return {{"kind", "bump"}, {"epsilon", b_.epsilon()}, {"center", c_}, {"widths", w_}};
}

cplx PlaneWaveSymbol::eval(std::span<const double> xi) const {
    double t = 0;
    for (std::size_t k = 0; k < z_.size(); ++k) t += xi[k] * z_[k];
    t *= 2 * kPi;
    return {std::cos(t), std::sin(t)};
}

bool PlaneWaveSymbol::real_valued() const {
    for (double v : z_)
        if (v != 0) return false;
    return true;
}

nlohmann::json PlaneWaveSymbol::describe() const { return {{"kind", "plane_wave"}, {"z", z_}}; }

GridSymbol::GridSymbol(SymbolGrid g) : g_(std::move(g)) {
    if (g_.n < 1 || g_.n > 2 || g_.N < 2) throw std::invalid_argument("bad symbol grid");
    std::size_t want = g_.n == 1 ? g_.N : static_cast<std::size_t>(g_.N) * g_.N;
    if (g_.values.size() != want) throw std::invalid_argument("symbol grid size mismatch");
}

cplx GridSymbol::eval(std::span<const double> xi) const {
    int i[2] = {0, 0};
    double f[2] = {0, 0};
    for (int d = 0; d < g_.n; ++d) {
        double x = (xi[d] - g_.lo[d]) / (g_.hi[d] - g_.lo[d]) * (g_.N - 1);
        if (x < 0 || x > g_.N - 1) return 0;
        i[d] = std::min(g_.N - 2, static_cast<int>(x));
        f[d] = x - i[d];
    }
    if (g_.n == 1) return (1 - f[0]) * g_.values[i[0]] + f[0] * g_.values[i[0] + 1];
    auto at = [&](int a, int b) { return g_.values[static_cast<std::size_t>(a) * g_.N + b]; };
    return (1 - f[0]) * ((1 - f[1]) * at(i[0], i[1]) + f[1] * at(i[0], i[1] + 1)) +
           f[0] * ((1 - f[1]) * at(i[0] + 1, i[1]) + f[1] * at(i[0] + 1, i[1] + 1));
}

nlohmann::json GridSymbol::describe() const {
    return {{"kind", "grid"}, {"N", g_.N}, {"source", g_.source}};
}

SymbolGrid sample_symbol(const Symbol& s, const ConvexDomain& omega, int N) {
    if (N < 2) throw std::invalid_argument("symbol grid needs N >= 2");
    ConvexDomain dbl = omega.scaled(2);
    SymbolGrid g;
    g.n = omega.dim;
    if (g.n > 2) throw std::invalid_argument("symbols support n <= 2");
    g.N = N;
    g.lo = dbl.bbox_lo();
    g.hi = dbl.bbox_hi();
    g.source = s.describe();
    std::vector<double> x(g.n);
    if (g.n == 1) {
        for (int a = 0; a < N; ++a) {
            x[0] = g.lo[0] + a * (g.hi[0] - g.lo[0]) / (N - 1);
            g.values.push_back(s.eval(x));
        }
    } else {
        g.values.reserve(static_cast<std::size_t>(N) * N);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                x[0] = g.lo[0] + a * (g.hi[0] - g.lo[0]) / (N - 1);
                x[1] = g.lo[1] + b * (g.hi[1] - g.lo[1]) / (N - 1);
                g.values.push_back(s.eval(x));
            }
    }
    return g;
}

namespace {
constexpr char kSymMagic[8] = {'P', 'W', 'L', 'S', 'Y', 'M', '0', '1'};
}

void write_symbol(const std::string& path, const SymbolGrid& g) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    nlohmann::json h = {{"version", kArtifactVersion}, {"n", g.n}, {"N", g.N}, {"lo", g.lo}, {"hi", g.hi}, {"source", g.source}};
    std::string hs = h.dump();
    std::uint64_t len = hs.size();
    f.write(kSymMagic, 8);
    f.write(reinterpret_cast<const char*>(&len), sizeof len);
    f.write(hs.data(), static_cast<std::streamsize>(len));
    for (const cplx& v : g.values) {
        double re = v.real(), im = v.imag();
        f.write(reinterpret_cast<const char*>(&re), sizeof re);
        f.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
}

SymbolGrid read_symbol(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, kSymMagic, 8) != 0) throw std::runtime_error(path + " is not a symbol file");
    std::uint64_t len = 0;
    f.read(reinterpret_cast<char*>(&len), sizeof len);
    std::string hs(len, '\0');
    f.read(hs.data(), static_cast<std::streamsize>(len));
    auto h = nlohmann::json::parse(hs);
    SymbolGrid g;
    g.n = h.at("n");
    g.N = h.at("N");
    g.lo = h.at("lo").get<std::vector<double>>();
    g.hi = h.at("hi").get<std::vector<double>>();
    g.source = h.value("source", nlohmann::json::object());
    std::size_t count = g.n == 1 ? g.N : static_cast<std::size_t>(g.N) * g.N;
    g.values.resize(count);
    for (auto& v : g.values) {
        double re, im;
        f.read(reinterpret_cast<char*>(&re), sizeof re);
        f.read(reinterpret_cast<char*>(&im), sizeof im);
        v = cplx(re, im);
    }
    if (!f) throw std::runtime_error("truncated symbol file " + path);
    return g;
}

}  // namespace pwlab
