#ifndef PWLAB_BESOV_HPP
#define PWLAB_BESOV_HPP

#include <vector>

#include "pwlab/partition.hpp"
#include "pwlab/symbol.hpp"

namespace pwlab {

struct BesovParams {
    double s = 0;
    double p = 2, q = 2;  // infinity allowed
};

struct BesovOptions {
    int n_ref = 64;           // starting samples per axis in a member frame
    int pad = 2;
    int cap = 0;              // largest n_ref tried; 0 picks 1024 in 2-D and 65536 in 1-D
    double refine_shell = 5e-4;
    double max_shell = 1e-3;  // complete members above this raise
};

// L^p norms of f * psi_t for one member, for several p from one transform.
struct TileNorms {
    int tile = 0, j = 0;
    bool complete = true;
    int n_ref = 0;
    double shell = 0;        // largest shell fraction over the requested p
    std::vector<double> lp;  // one per requested p
};

TileNorms tile_convolution(const Symbol& f, const Partition& pou, int t, std::span<const double> ps,
                           const BesovOptions& opt = {});
std::vector<TileNorms> all_tile_norms(const Symbol& f, const Partition& pou, std::span<const double> ps,
                                      const BesovOptions& opt = {});

// ||phi_hat psi_hat_t||_{L^2} by the midpoint rule in the member frame (Parseval oracle).
double fourier_l2(const Symbol& f, const Partition& pou, int t, int n_ref = 256);

struct BesovResult {
    double value = 0;
    std::vector<double> per_scale;  // sum over level-j tiles of a^{-qjs} ||f * psi||_p^q (max for q = inf)
    double max_shell = 0;
};

// (sum a^{-qjs} ||f * psi_j^i||_p^q)^{1/q} from precomputed tile norms; k selects the p column.
BesovResult besov_from_tiles(const std::vector<TileNorms>& tiles, std::size_t k, double s, double q, double a, int j_max);
BesovResult besov_norm(const Symbol& f, const Partition& pou, const BesovParams& prm, const BesovOptions& opt = {});

// max(A/B, B/A); 1 when both vanish.
double equivalence_ratio(const Symbol& f, const Partition& A, const Partition& B, const BesovParams& prm,
                         const BesovOptions& opt = {});

}  // namespace pwlab

#endif
