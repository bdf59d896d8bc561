#ifndef PWLAB_PARTITION_HPP
#define PWLAB_PARTITION_HPP

#include <string>
#include <vector>

#include "pwlab/bump.hpp"
#include "pwlab/decomposition.hpp"
#include "pwlab/fourier.hpp"

namespace pwlab {

enum class PouKind { Normalized, Squared };
std::string to_string(PouKind k);

// Affine frame of a member's Fourier support: xi = center + M u with u in (-1/2, 1/2)^n.
struct MemberFrame {
    std::vector<double> center;
    Eigen::MatrixXd M;
    double abs_det = 1;
};

// Normalized family: psi_t = phi_t / sum_k phi_k with phi_t = bump ∘ T_t, supported in A_t.
// Squared family: psi_t = a^j (phi_t * phi_t), supported in 2 A_t; built from the unnormalized phi_t so that
// the self-convolution is exact: a^j |det B| (b * b)(B^{-1}(xi - 2c)).
// Tiles whose A is the ball {r < 4/5} use a radial profile equal to 1 on {r <= 3/4}.
class Partition {
public:
    Partition(Decomposition dec, double bump_epsilon, PouKind kind = PouKind::Normalized);

    const Decomposition& decomposition() const { return dec_; }
    const BumpProfile& bump() const { return bump_; }
    PouKind kind() const { return kind_; }
    std::size_t size() const { return dec_.size(); }
    int level(int t) const { return dec_.tiles[t].j; }

    double raw(int t, std::span<const double> xi) const;
    double member(int t, std::span<const double> xi) const;
    double raw_sum(std::span<const double> xi) const;
    double sum(std::span<const double> xi) const;
    // Tiles whose member may be nonzero at xi.
    std::vector<int> candidates(std::span<const double> xi) const;
    bool in_support_box(int t, std::span<const double> xi) const;

    MemberFrame frame(int t) const;
    const std::vector<int>& neighbors(int t) const { return nbr_[t]; }
    // Largest level gap between overlapping members. Members within this many levels of j_max may miss
    // neighbours cut by the truncation, which makes the normalized quotient discontinuous there.
    int reach() const { return reach_; }
    bool complete(int t) const { return level(t) <= dec_.j_max - reach_; }

private:
    double ball_raw(std::span<const double> xi) const;
    double ball_selfconv(std::span<const double> v) const;

    Decomposition dec_;
    BumpProfile bump_;
    BumpProfile ball_;
    PouKind kind_;
    int n_ = 1;
    std::vector<std::vector<double>> center_, minv_;
    std::vector<std::vector<int>> nbr_;
    Vec2 pc_{0, 0};
    double ball_rho_ = 0;  // radius of a disc about pc containing {r < 1}
    // self-convolution of the radial member on a square grid about the origin
    std::vector<double> ball_conv_;
    int ball_n_ = 0;
    int n_ball_ = 0;
    int reach_ = 0;
    double ball_h_ = 0;
};

struct PartitionCheck {
    std::size_t nodes = 0, covered = 0, support_violations = 0;
    double max_sum_error = 0;                   // normalized: |sum - 1| on covered nodes
    double denom_min = 0, denom_max = 0;        // normalized: sum of unnormalized members on covered nodes
    double envelope_min = 0, envelope_max = 0;  // squared: sum of members on covered nodes of 2 Omega
};

// Nodes are cell centres of an N^n grid over the bounding box of Omega (normalized) or 2 Omega (squared);
// covered nodes have omega_{Omega'/2} > a^{-j_max} for Omega' the support domain.
PartitionCheck check_partition(const Partition& pou, int grid, std::uint64_t seed);

struct L1Estimate {
    double value = 0;
    double shell = 0;  // tail indicator
};

// Space-side L1 norm of one member, affine-invariant form computed in the member frame. The sampling grid
// starts at n_ref per axis and doubles until the outer shell holds under 5e-4 of the mass.
L1Estimate l1_norm(const Partition& pou, int t, int n_ref = 256, int pad = 2);
// L1 norm of the base bump's inverse transform, from 1-D transforms (tensor structure).
double bump_l1_norm(const BumpProfile& b, int n_ref = 4096, int pad = 16);

struct PouReportRow {
    int tile = 0, j = 0;
    bool complete = false;  // L1 is computed only for complete members
    double l1 = 0, shell = 0;
    std::vector<double> lo, hi;  // support bounding box
};
std::vector<PouReportRow> partition_report(const Partition& pou, int n_ref = 256, int pad = 2);

// pou.bin: magic, JSON header with the construction parameters, then per-member samples on the
// global grid over the support domain's bounding box (sparse: each member's bounding index box).
void write_partition(const std::string& path, const Partition& pou, int grid);
Partition read_partition(const std::string& path);

}  // namespace pwlab

#endif
