#ifndef PWLAB_DECOMPOSITION_HPP
#define PWLAB_DECOMPOSITION_HPP

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "json.hpp"
#include "pwlab/geometry.hpp"
#include "pwlab/polygon.hpp"

namespace pwlab {

// One pair (E, A). A is the open parallelepiped {center + edges * u : u in (-1/2, 1/2)^n},
// so T(x) = edges^{-1} (x - center) maps A onto the unit cube.
struct Tile {
    int j = 0;
    std::vector<int> index;  // box: signed multi-index; smooth: {i}, 1-based; polygon: {corner, i1, i2}
    double measure = 0;
    std::vector<double> centroid;

    std::vector<double> e_lo, e_hi;  // box: E exactly; planar: bounding box of E
    std::vector<Polygon> e_pieces;   // polygon decomposition: convex pieces of E
    Polygon e_hull;                  // planar: convex polygon containing E
    double r0 = 0, r1 = 0, t0 = 0, t1 = 0;  // curved: E = {r in (r0, r1), t in (t0, t1)}

    std::vector<double> a_center;
    Eigen::MatrixXd a_edges, a_edges_inv;
    bool a_is_ball = false;  // j = 0 tiles of curved domains: A = {r < 4/5}
    bool a_refit = false;    // low-level polygon tile whose pulled-back A left the domain
    Polygon a_poly;          // planar outline of A

    std::vector<double> g_lo, g_hi;  // box
    Polygon g_poly;                  // polygon decomposition
    double g_rmin = 0, g_t0 = 0, g_t1 = 1;  // curved: sector r >= g_rmin, t in (g_t0, g_t1) mod 1

    std::vector<double> to_unit(std::span<const double> x) const;
    std::vector<double> from_unit(std::span<const double> u) const;
};

enum class DecKind { Box, Smooth, Polygon };
std::string to_string(DecKind k);

struct CornerChart {
    Vec2 origin;                // image of u = 0
    std::array<double, 4> L{};  // x = origin + L u, row-major
    std::array<double, 4> Linv{};
    Polygon cell;               // the corner cell [v_k, m_k, centroid, m_{k-1}]
    double lambda = 1;
};

struct Decomposition {
    ConvexDomain domain;
    DecKind kind = DecKind::Box;
    double a = 2;
    int j_max = 0;
    int m = 0;
    double epsilon = 0;
    int j0 = 1;  // first level whose A are genuine parallelepipeds inside the domain
    std::vector<Tile> tiles;
    std::vector<int> counts;        // n_j
    std::vector<int> level_offset;  // curved: first tile of level j
    std::map<std::vector<int>, int> index_map;
    std::vector<CornerChart> charts;
    int M1 = 0, M2 = 0;  // curved: measured sector constants for the G regions

    std::size_t size() const { return tiles.size(); }
    int locate(std::span<const double> x) const;  // tile whose E contains x, or -1
    int locate(Vec2 x) const { return locate(std::span<const double>(x.data(), 2)); }
    bool in_tile(int t, std::span<const double> x) const;
    bool in_G(int t, std::span<const double> x) const;
    Decomposition scaled(double s) const;
};

struct DecompParams {
    int j_max = 5;
    int m = 3;
    double epsilon = 0.05;
};

Decomposition decompose_smooth2d(const ConvexDomain& d, int m, double epsilon, int j_max);
Decomposition decompose_box(const ConvexDomain& box, int j_max);
Decomposition decompose_box(int n, int j_max);  // (-1, 1)^n
Decomposition decompose_polygon2d(const ConvexDomain& d, int j_max);
Decomposition decompose(const ConvexDomain& d, const DecompParams& p);

// 1-D cube index of a coordinate in (-1, 1) and the closed-form sum index.
int cube_index_1d(double u);
int beta_1d(int i, int k);
double cube_e_lo(int i), cube_e_hi(int i), cube_a_lo(int i), cube_a_hi(int i);

// Tile index of the doubled tile 2E_beta meeting E_t1 + E_t2. Throws
// "truncation exceeded" when no tile within the truncation qualifies.
int beta_index(const Decomposition& dec, int t1, int t2);

nlohmann::json decomposition_to_json(const Decomposition& dec);
// Rebuilds from the stored construction parameters and checks the tile count.
Decomposition decomposition_from_json(const nlohmann::json& j);

// Measured constants for properties (i)-(viii) and (iii').
nlohmann::json admissibility_report(const Decomposition& dec, std::size_t samples, std::uint64_t seed);

}  // namespace pwlab

#endif
