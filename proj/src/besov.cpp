#include "pwlab/besov.hpp"

#include <algorithm>
#include <limits>

namespace pwlab {

namespace {

double lp_scaled(const UnitTransform& tr, double p, double det) {
    // f * psi(x) = |det M| g(M^T x), so ||f * psi||_p = |det M|^{1 - 1/p} ||g||_p
    double e = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
    return std::pow(det, e) * tr.lp_norm(p);
}

}  // namespace

TileNorms tile_convolution(const Symbol& f, const Partition& pou, int t, std::span<const double> ps,
                           const BesovOptions& opt) {
    for (double p : ps)
        if (!(p >= 1)) throw std::invalid_argument("p must be >= 1");
    MemberFrame fr = pou.frame(t);
    const int n = static_cast<int>(fr.center.size());
    const int cap = opt.cap > 0 ? opt.cap : (n == 1 ? 1 << 16 : 1024);
    std::vector<double> xi(n);
    auto sampler = [&](std::span<const double> u) -> cplx {
        for (int r = 0; r < n; ++r) {
            double s = fr.center[r];
            for (int k = 0; k < n; ++k) s += fr.M(r, k) * u[k];
            xi[r] = s;
        }
        double m = pou.member(t, xi);
        return m == 0 ? cplx(0) : f.eval(xi) * m;
    };
    TileNorms out;
    out.tile = t;
    out.j = pou.level(t);
    out.complete = pou.kind() == PouKind::Squared || pou.complete(t);
    for (int N = std::min(opt.n_ref, cap);; N *= 2) {
        auto tr = unit_transform(n, N, opt.pad, sampler);
        out.n_ref = N;
        out.shell = 0;
        out.lp.clear();
        for (double p : ps) {
            out.lp.push_back(lp_scaled(tr, p, fr.abs_det));
            out.shell = std::max(out.shell, tr.shell_fraction(p));
        }
        if (out.shell <= opt.refine_shell || 2 * N > cap) break;
        // incomplete members carry the truncation jump; their tail never settles, so do not refine them far
        if (!out.complete && N >= 256) break;
    }
    if (out.complete && out.shell > opt.max_shell)
        throw std::runtime_error("aliasing indicator " + fmt(out.shell) + " for tile " + std::to_string(t) +
                                 " exceeds " + fmt(opt.max_shell));
    return out;
}

std::vector<TileNorms> all_tile_norms(const Symbol& f, const Partition& pou, std::span<const double> ps,
                                      const BesovOptions& opt) {
    std::vector<TileNorms> out;
    out.reserve(pou.size());
    for (std::size_t t = 0; t < pou.size(); ++t) out.push_back(tile_convolution(f, pou, static_cast<int>(t), ps, opt));
    return out;
}

double fourier_l2(const Symbol& f, const Partition& pou, int t, int n_ref) {
    MemberFrame fr = pou.frame(t);
    const int n = static_cast<int>(fr.center.size());
    std::vector<double> xi(n);
    double s = 0;
    const std::size_t total = n == 1 ? n_ref : static_cast<std::size_t>(n_ref) * n_ref;
    for (std::size_t idx = 0; idx < total; ++idx) {
        int k[2] = {static_cast<int>(n == 1 ? idx : idx / n_ref), static_cast<int>(idx % n_ref)};
        for (int r = 0; r < n; ++r) {
            double v = fr.center[r];
            for (int c = 0; c < n; ++c) v += fr.M(r, c) * unit_node(k[n == 1 ? 0 : c], n_ref);
            xi[r] = v;
        }
        double m = pou.member(t, xi);
        if (m != 0) s += std::norm(f.eval(xi) * m);
    }
    return std::sqrt(s * fr.abs_det / static_cast<double>(total));
}

BesovResult besov_from_tiles(const std::vector<TileNorms>& tiles, std::size_t k, double s, double q, double a, int j_max) {
    if (!(q >= 1)) throw std::invalid_argument("q must be >= 1");
    BesovResult r;
    r.per_scale.assign(j_max + 1, 0.0);
    for (const auto& t : tiles) {
        double v = std::pow(a, -t.j * s) * t.lp.at(k);
        if (std::isinf(q))
            r.per_scale[t.j] = std::max(r.per_scale[t.j], v);
        else
            r.per_scale[t.j] += std::pow(v, q);
        if (t.complete) r.max_shell = std::max(r.max_shell, t.shell);
    }
    if (std::isinf(q)) {
        for (double v : r.per_scale) r.value = std::max(r.value, v);
    } else {
        double tot = 0;
        for (double v : r.per_scale) tot += v;
        r.value = std::pow(tot, 1 / q);
    }
    return r;
}

BesovResult besov_norm(const Symbol& f, const Partition& pou, const BesovParams& prm, const BesovOptions& opt) {
    double ps[1] = {prm.p};
    auto tiles = all_tile_norms(f, pou, ps, opt);
    const Decomposition& d = pou.decomposition();
    return besov_from_tiles(tiles, 0, prm.s, prm.q, d.a, d.j_max);
}

double equivalence_ratio(const Symbol& f, const Partition& A, const Partition& B, const BesovParams& prm,
                         const BesovOptions& opt) {
    double x = besov_norm(f, A, prm, opt).value, y = besov_norm(f, B, prm, opt).value;
    if (x == 0 && y == 0) return 1;
    if (x == 0 || y == 0) throw std::runtime_error("one Besov norm vanishes and the other does not");
    return std::max(x / y, y / x);
}

}  // namespace pwlab
