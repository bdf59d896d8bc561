#ifndef PWLAB_COMMON_HPP
#define PWLAB_COMMON_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwlab {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr double kPi = 3.14159265358979323846;

using cplx = std::complex<double>;
using Vec2 = std::array<double, 2>;
using Rng = std::mt19937_64;

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a[0], s * a[1]}; }
inline double dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }
inline double cross(Vec2 a, Vec2 b) { return a[0] * b[1] - a[1] * b[0]; }
inline double norm(Vec2 a) { return std::hypot(a[0], a[1]); }

// Per-shard seeds derived from a master seed by a fixed splitmix64 step, so
// data-parallel loops never share generator state.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t shard);

inline double uniform(Rng& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

// 17 significant digits, independent of the global locale.
std::string fmt(double v);

// FNV-1a, used for config hashes in output headers.
std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

// Least-squares slope and intercept of y against x.
struct LineFit {
    double slope = 0, intercept = 0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace pwlab

#endif
