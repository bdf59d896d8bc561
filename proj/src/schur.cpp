#include "pwlab/schur.hpp"

#include <algorithm>
#include <map>

namespace pwlab {

Eigen::MatrixXd assemble_schur_matrix(const Decomposition& dec, double sigma, double tau, double rho, int j_max) {
    if (j_max > dec.j_max) throw std::out_of_range("truncation exceeded");
    std::vector<int> keep;
    for (std::size_t t = 0; t < dec.size(); ++t)
        if (dec.tiles[t].j <= j_max) keep.push_back(static_cast<int>(t));
    const double a = dec.a;
    Eigen::MatrixXd T(keep.size(), keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (std::size_t c = 0; c < keep.size(); ++c) {
            int b = beta_index(dec, keep[r], keep[c]);
            int bl = dec.tiles[b].j;
            if (bl > j_max) throw std::out_of_range("truncation exceeded");
            T(r, c) = std::pow(a, -dec.tiles[keep[r]].j * sigma - dec.tiles[keep[c]].j * tau + bl * rho);
        }
    return T;
}

namespace {

// Collects rows and merges duplicates.
class RowSet {
public:
    explicit RowSet(BetaHistogram& h) : h_(h) {}
    void add(int level, const std::vector<std::uint32_t>& row, std::size_t mult) {
        auto key = std::make_pair(level, row);
        auto it = seen_.find(key);
        if (it != seen_.end()) {
            h_.multiplicity[it->second] += mult;
            return;
        }
        seen_.emplace(std::move(key), h_.level.size());
        h_.level.push_back(level);
        h_.multiplicity.push_back(mult);
        h_.counts.insert(h_.counts.end(), row.begin(), row.end());
    }

private:
    BetaHistogram& h_;
    std::map<std::pair<int, std::vector<std::uint32_t>>, std::size_t> seen_;
};

bool disc_symmetric(const Decomposition& dec) {
    if (dec.kind != DecKind::Smooth || dec.domain.kind != DomainKind::Disc2D) return false;
    // tiles of level j must be the sectors 0, 1, ... of equal angle in order
    for (int j = 0; j <= dec.j_max; ++j) {
        const int n = dec.counts[j], off = dec.level_offset[j];
        for (int l = 0; l < n; ++l)
            if (std::abs(dec.tiles[off + l].t0 - static_cast<double>(l) / n) > 1e-12) return false;
    }
    for (int j = 0; j + 1 <= dec.j_max; ++j)
        if (dec.counts[j + 1] != 2 * dec.counts[j]) return false;
    return true;
}

int beta_level(const Decomposition& dec, int t, int u) {
    return dec.tiles[beta_index(dec, t, u)].j;
}

}  // namespace

BetaHistogram beta_histogram(const Decomposition& dec) {
    BetaHistogram h;
    h.a = dec.a;
    h.J = dec.j_max;
    const int W = h.J + 1;
    h.max_excess = -W;
    RowSet rows(h);
    if (!disc_symmetric(dec)) {
        const std::size_t N = dec.size();
        std::vector<std::uint32_t> all(N * W * W, 0);
        // beta is symmetric in its arguments, so each unordered pair is located once
        for (std::size_t t = 0; t < N; ++t)
            for (std::size_t u = t; u < N; ++u) {
                int b = beta_level(dec, static_cast<int>(t), static_cast<int>(u));
                int jt = dec.tiles[t].j, ju = dec.tiles[u].j;
                h.max_excess = std::max(h.max_excess, b - std::min(jt, ju));
                ++all[(t * W + ju) * W + b];
                if (u != t) ++all[(u * W + jt) * W + b];
            }
        for (std::size_t t = 0; t < N; ++t)
            rows.add(dec.tiles[t].j, std::vector<std::uint32_t>(all.begin() + t * W * W, all.begin() + (t + 1) * W * W), 1);
        return h;
    }
    // Rotation by one level-j sector maps every level >= j onto itself. Hence
    //  - a level-j row has the same partner counts at levels k >= j for all of its tiles (take sector 0);
    //  - the level-j partners of tile (k, l), k > j, are the pairs ((j, 0), (k, l')) with l' = l mod 2^{k-j}.
    std::vector<std::vector<std::uint32_t>> upper(W, std::vector<std::uint32_t>(W * W, 0));  // [j] -> (k, b)
    std::vector<std::vector<std::vector<std::uint32_t>>> cls(W * W);                     // [j * W + k][c] -> b
    for (int j = 0; j < W; ++j) {
        const int rep = dec.level_offset[j];
        for (int k = j; k < W; ++k) {
            const int nk = dec.counts[k], off = dec.level_offset[k];
            const int nc = 1 << (k - j);
            auto& C = cls[j * W + k];
            C.assign(nc, std::vector<std::uint32_t>(W, 0));
            for (int l = 0; l < nk; ++l) {
                int b = beta_level(dec, rep, off + l);
                h.max_excess = std::max(h.max_excess, b - j);
                ++upper[j][k * W + b];
                ++C[l % nc][b];
            }
        }
    }
    std::vector<std::uint32_t> row(W * W);
    for (int k = 0; k < W; ++k) {
        // rows at level k depend only on l mod 2^k; class c has counts[k] / 2^k tiles
        const int nc = 1 << k;
        const std::size_t mult = static_cast<std::size_t>(dec.counts[k] / nc);
        for (int c = 0; c < nc; ++c) {
            std::fill(row.begin(), row.end(), 0);
            for (int kk = k; kk < W; ++kk)
                for (int b = 0; b < W; ++b) row[kk * W + b] = upper[k][kk * W + b];
            for (int j = 0; j < k; ++j) {
                const auto& C = cls[j * W + k][c % (1 << (k - j))];
                for (int b = 0; b < W; ++b) row[j * W + b] += C[b];
            }
            rows.add(k, row, mult);
        }
    }
    return h;
}

SchurTestReport schur_test(const BetaHistogram& h, double sigma, double tau, double rho, double gamma,
                           const std::vector<int>& truncations) {
    if (truncations.size() < 3) throw std::invalid_argument("schur_test needs at least 3 truncations");
    SchurTestReport rep{sigma, tau, rho, gamma, {}, 0, 0, false};
    const int W = h.J + 1;
    std::vector<double> A(W), G(W), S(W), T(W);
    for (int k = 0; k < W; ++k) {
        A[k] = std::pow(h.a, k * rho);
        G[k] = std::pow(h.a, -k * gamma);
        S[k] = std::pow(h.a, -k * sigma);
        T[k] = std::pow(h.a, -k * tau);
    }
    std::vector<double> inner(W);
    for (int Jt : truncations) {
        if (Jt > h.J || Jt < 0) throw std::out_of_range("truncation exceeded");
        SchurSums s;
        s.j_max = Jt;
        for (std::size_t t = 0; t < h.rows(); ++t) {
            const int j = h.level[t];
            if (j > Jt) continue;
            // row:    sum over partners (k, b) of a^{-j sigma - k tau + b rho} w_k / w_j
            // column: sum over partners (k, b) of a^{-k sigma - j tau + b rho} w_k / w_j
            double row = 0, col = 0;
            for (int k = 0; k <= Jt; ++k) {
                double in = 0;
                for (int b = 0; b < W; ++b) {
                    std::uint32_t c = h.at(t, k, b);
                    if (!c) continue;
                    if (b > Jt) throw std::out_of_range("truncation exceeded");
                    in += c * A[b];
                }
                row += in * G[k] * T[k];
                col += in * G[k] * S[k];
            }
            row *= S[j] / G[j];
            col *= T[j] / G[j];
            s.row_sup = std::max(s.row_sup, row);
            s.col_sup = std::max(s.col_sup, col);
        }
        rep.sums.push_back(s);
    }
    std::vector<double> x, yr, yc;
    for (auto& s : rep.sums) {
        x.push_back(s.j_max);
        yr.push_back(std::log(s.row_sup));
        yc.push_back(std::log(s.col_sup));
    }
    rep.row_rate = fit_line(x, yr).slope;
    rep.col_rate = fit_line(x, yc).slope;
    rep.stable = rep.row_rate <= kGrowthRate && rep.col_rate <= kGrowthRate;
    return rep;
}

}  // namespace pwlab
