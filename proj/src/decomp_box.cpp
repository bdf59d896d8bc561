#include "pwlab/decomposition.hpp"

namespace pwlab {

namespace {

void multi_indices(int n, int budget, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
    }
    for (int i = -budget; i <= budget; ++i) {
        cur.push_back(i);
        multi_indices(n, budget - std::abs(i), cur, out);
        cur.pop_back();
    }
}

}  // namespace

Decomposition decompose_box(const ConvexDomain& box, int j_max) {
    if (box.kind != DomainKind::BoxN) throw std::invalid_argument("decompose_box needs a box");
    if (j_max < 0) throw std::invalid_argument("j_max must be nonnegative");
    const int n = box.dim;
    Decomposition dec;
    dec.domain = box;
    dec.kind = DecKind::Box;
    dec.a = 2;
    dec.j_max = j_max;
    dec.j0 = 1;
    dec.counts.assign(j_max + 1, 0);

    std::vector<std::vector<int>> idx;
    std::vector<int> cur;
    multi_indices(n, j_max, cur, idx);
    std::stable_sort(idx.begin(), idx.end(), [](const auto& x, const auto& y) {
        int lx = 0, ly = 0;
        for (int v : x) lx += std::abs(v);
        for (int v : y) ly += std::abs(v);
        return lx < ly;
    });

    for (const auto& ix : idx) {
        Tile t;
        t.index = ix;
        t.e_lo.resize(n);
        t.e_hi.resize(n);
        t.g_lo.resize(n);
        t.g_hi.resize(n);
        t.a_center.resize(n);
        t.centroid.resize(n);
        t.a_edges = Eigen::MatrixXd::Zero(n, n);
        t.measure = 1;
        for (int k = 0; k < n; ++k) {
            const double W = box.half_widths[k] * box.scale;
            t.j += std::abs(ix[k]);
            t.e_lo[k] = W * cube_e_lo(ix[k]);
            t.e_hi[k] = W * cube_e_hi(ix[k]);
            double alo = W * cube_a_lo(ix[k]), ahi = W * cube_a_hi(ix[k]);
            t.a_center[k] = 0.5 * (alo + ahi);
            t.a_edges(k, k) = ahi - alo;
            t.centroid[k] = 0.5 * (t.e_lo[k] + t.e_hi[k]);
            t.measure *= t.e_hi[k] - t.e_lo[k];
            // G = Omega ∩ (2E - Omega), per axis
            t.g_lo[k] = std::max(-W, 2 * t.e_lo[k] - W);
            t.g_hi[k] = std::min(W, 2 * t.e_hi[k] + W);
        }
        t.a_edges_inv = t.a_edges.inverse();
        if (n == 2) {
            t.e_hull = {{t.e_lo[0], t.e_lo[1]}, {t.e_hi[0], t.e_lo[1]}, {t.e_hi[0], t.e_hi[1]}, {t.e_lo[0], t.e_hi[1]}};
            double h0 = 0.5 * t.a_edges(0, 0), h1 = 0.5 * t.a_edges(1, 1);
            Vec2 c{t.a_center[0], t.a_center[1]};
            t.a_poly = {c + Vec2{-h0, -h1}, c + Vec2{h0, -h1}, c + Vec2{h0, h1}, c + Vec2{-h0, h1}};
        }
        ++dec.counts[t.j];
        dec.index_map[ix] = static_cast<int>(dec.tiles.size());
        dec.tiles.push_back(std::move(t));
    }
    return dec;
}

Decomposition decompose_box(int n, int j_max) {
    if (n < 1) throw std::invalid_argument("dimension must be at least 1");
    return decompose_box(ConvexDomain::box(std::vector<double>(n, 1.0)), j_max);
}

}  // namespace pwlab
