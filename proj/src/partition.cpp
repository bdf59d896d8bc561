#include "pwlab/partition.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>

#include "pwlab/domain_io.hpp"
#include "pwlab/weight.hpp"

namespace pwlab {

std::string to_string(PouKind k) { return k == PouKind::Normalized ? "normalized" : "squared"; }

namespace {

constexpr double kBallSupport = 0.8;  // A = {r < 4/5}
constexpr double kBallFlat = 0.75;    // E = {r < 3/4}

bool boxes_meet(const Tile& a, const Tile& b) {
    for (int k = 0; k < a.a_edges.rows(); ++k) {
        double ah = 0.5 * a.a_edges(k, k), bh = 0.5 * b.a_edges(k, k);
        if (!(a.a_center[k] - ah < b.a_center[k] + bh && b.a_center[k] - bh < a.a_center[k] + ah)) return false;
    }
    return true;
}

struct Box2 {
    double xl, xh, yl, yh;
};

Box2 poly_box(const Polygon& p) {
    Box2 b{1e300, -1e300, 1e300, -1e300};
    for (auto& v : p) {
        b.xl = std::min(b.xl, v[0]); b.xh = std::max(b.xh, v[0]);
        b.yl = std::min(b.yl, v[1]); b.yh = std::max(b.yh, v[1]);
    }
    return b;
}

}  // namespace

Partition::Partition(Decomposition dec, double bump_epsilon, PouKind kind)
    : dec_(std::move(dec)), bump_(bump_epsilon, dec_.domain.dim), kind_(kind), n_(dec_.domain.dim) {
    const std::size_t N = dec_.size();
    bool any_ball = false;
    for (auto& t : dec_.tiles) n_ball_ += t.a_is_ball;
    any_ball = n_ball_ > 0;
    if (any_ball) {
        pc_ = polar_center(dec_.domain);
        if (dec_.domain.kind == DomainKind::Disc2D) {
            ball_rho_ = dec_.domain.radius * dec_.domain.scale;
        } else {
            for (int k = 0; k < 4096; ++k) ball_rho_ = std::max(ball_rho_, norm(boundary_point(dec_.domain, k / 4096.0) - pc_));
            ball_rho_ *= 1.001;
        }
        ball_ = BumpProfile(1 - kBallFlat / kBallSupport, 1);
    }
    center_.resize(N);
    minv_.resize(N);
    const double flat = 0.5 * (1 - bump_epsilon);
    for (std::size_t t = 0; t < N; ++t) {
        const Tile& T = dec_.tiles[t];
        if (T.a_is_ball) continue;
        center_[t] = T.a_center;
        minv_[t].resize(n_ * n_);
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < n_; ++c) minv_[t][r * n_ + c] = T.a_edges_inv(r, c);
        // the bump must equal 1 on E, i.e. T(E) inside the flat top
        double reach = 0;
        if (dec_.kind == DecKind::Box) {
            for (int k = 0; k < n_; ++k)
                reach = std::max({reach, std::abs(T.a_edges_inv(k, k) * (T.e_lo[k] - T.a_center[k])),
                                  std::abs(T.a_edges_inv(k, k) * (T.e_hi[k] - T.a_center[k]))});
        } else {
            for (auto& v : T.e_hull) {
                auto u = T.to_unit(std::span<const double>(v.data(), 2));
                reach = std::max({reach, std::abs(u[0]), std::abs(u[1])});
            }
        }
        if (reach > flat + 1e-9)
            throw std::invalid_argument("bump epsilon " + fmt(bump_epsilon) + " exceeds the tile margin (tile " +
                                        std::to_string(t) + " reaches " + fmt(reach) + ")");
    }

    nbr_.assign(N, {});
    if (dec_.kind == DecKind::Box) {
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b)
                if (boxes_meet(dec_.tiles[a], dec_.tiles[b])) nbr_[a].push_back(static_cast<int>(b));
    } else {
        std::vector<Box2> bx(N);
        for (std::size_t a = 0; a < N; ++a) bx[a] = poly_box(dec_.tiles[a].a_poly);
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) {
                if (!(bx[a].xl < bx[b].xh && bx[b].xl < bx[a].xh && bx[a].yl < bx[b].yh && bx[b].yl < bx[a].yh)) continue;
                if (a == b || convex_intersect(dec_.tiles[a].a_poly, dec_.tiles[b].a_poly)) nbr_[a].push_back(static_cast<int>(b));
            }
    }

    for (std::size_t a = 0; a < N; ++a)
        for (int b : nbr_[a]) reach_ = std::max(reach_, std::abs(dec_.tiles[a].j - dec_.tiles[b].j));

    if (any_ball && kind_ == PouKind::Squared) {
        // self-convolution of the radial member by FFT on a grid about the origin, wide enough that the
        // periodic wrap never reaches the support of the result
        ball_n_ = 512;
        const double half = 1.7 * ball_rho_;
        ball_h_ = 2 * half / ball_n_;
        const int M = ball_n_;
        fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(M) * M);
        fftw_plan fw = fftw_plan_dft_2d(M, M, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_plan bw = fftw_plan_dft_2d(M, M, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b) {
                int ia = a < M / 2 ? a : a - M, ib = b < M / 2 ? b : b - M;
                Vec2 x = pc_ + Vec2{ia * ball_h_, ib * ball_h_};
                std::size_t k = static_cast<std::size_t>(a) * M + b;
                buf[k][0] = ball_raw(std::span<const double>(x.data(), 2));
                buf[k][1] = 0;
            }
        fftw_execute(fw);
        for (std::size_t k = 0; k < static_cast<std::size_t>(M) * M; ++k) {
            double re = buf[k][0], im = buf[k][1];
            buf[k][0] = re * re - im * im;
            buf[k][1] = 2 * re * im;
        }
        fftw_execute(bw);
        ball_conv_.resize(static_cast<std::size_t>(M) * M);
        const double scale = ball_h_ * ball_h_ / (static_cast<double>(M) * M);
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b) {
                int ca = (a + M / 2) % M, cb = (b + M / 2) % M;  // centred layout: index M/2 is v = 0
                ball_conv_[static_cast<std::size_t>(ca) * M + cb] = buf[static_cast<std::size_t>(a) * M + b][0] * scale;
            }
        fftw_destroy_plan(fw);
        fftw_destroy_plan(bw);
        fftw_free(buf);
    }
}

double Partition::ball_raw(std::span<const double> xi) const {
    Polar p = to_polar(dec_.domain, {xi[0], xi[1]});
    return ball_.eval1d(p.r / (2 * kBallSupport));
}

double Partition::ball_selfconv(std::span<const double> v) const {
    const int M = ball_n_;
    double x = v[0] / ball_h_ + M / 2, y = v[1] / ball_h_ + M / 2;
    int a = static_cast<int>(std::floor(x)), b = static_cast<int>(std::floor(y));
    if (a < 0 || b < 0 || a >= M - 1 || b >= M - 1) return 0;
    if (std::hypot(v[0], v[1]) >= 2 * kBallSupport * ball_rho_) return 0;  // FFT residue outside the support
    double fx = x - a, fy = y - b;
    auto at = [&](int i, int j) { return ball_conv_[static_cast<std::size_t>(i) * M + j]; };
    double r = (1 - fx) * ((1 - fy) * at(a, b) + fy * at(a, b + 1)) + fx * ((1 - fy) * at(a + 1, b) + fy * at(a + 1, b + 1));
    return std::max(0.0, r);
}

double Partition::raw(int t, std::span<const double> xi) const {
    const Tile& T = dec_.tiles[t];
    if (T.a_is_ball) return ball_raw(xi);
    double u[8];
    const auto& c = center_[t];
    const auto& m = minv_[t];
    for (int r = 0; r < n_; ++r) {
        double s = 0;
        for (int k = 0; k < n_; ++k) s += m[r * n_ + k] * (xi[k] - c[k]);
        if (std::abs(s) >= 0.5) return 0;
        u[r] = s;
    }
    return bump_.eval(std::span<const double>(u, n_));
}

double Partition::member(int t, std::span<const double> xi) const {
    const Tile& T = dec_.tiles[t];
    if (kind_ == PouKind::Normalized) {
        double r = raw(t, xi);
        if (r == 0) return 0;
        double d = 0;
        for (int k : nbr_[t]) d += raw(k, xi);
        return r / d;
    }
    if (T.a_is_ball) {
        double v[2] = {xi[0] - 2 * pc_[0], xi[1] - 2 * pc_[1]};
        // the ball tiles share one member; split it evenly so the envelope counts it once
        return ball_selfconv(std::span<const double>(v, 2)) / n_ball_;
    }
    double u[8];
    const auto& c = center_[t];
    const auto& m = minv_[t];
    for (int r = 0; r < n_; ++r) {
        double s = 0;
        for (int k = 0; k < n_; ++k) s += m[r * n_ + k] * (xi[k] - 2 * c[k]);
        if (std::abs(s) >= 1) return 0;
        u[r] = s;
    }
    return std::pow(dec_.a, T.j) * std::abs(T.a_edges.determinant()) * bump_.self_conv(std::span<const double>(u, n_));
}

bool Partition::in_support_box(int t, std::span<const double> xi) const {
    const Tile& T = dec_.tiles[t];
    const double lim = kind_ == PouKind::Normalized ? 0.5 : 1.0;
    const double f = kind_ == PouKind::Normalized ? 1.0 : 2.0;
    if (T.a_is_ball) return std::hypot(xi[0] - f * pc_[0], xi[1] - f * pc_[1]) < f * kBallSupport * ball_rho_;
    for (int r = 0; r < n_; ++r) {
        double s = 0;
        for (int k = 0; k < n_; ++k) s += minv_[t][r * n_ + k] * (xi[k] - f * center_[t][k]);
        if (std::abs(s) >= lim) return false;
    }
    return true;
}

std::vector<int> Partition::candidates(std::span<const double> xi) const {
    std::vector<double> y(xi.begin(), xi.end());
    if (kind_ == PouKind::Squared)
        for (double& v : y) v *= 0.5;
    int t0 = dec_.locate(y);
    if (t0 >= 0) return nbr_[t0];
    std::vector<int> out;
    for (std::size_t t = 0; t < size(); ++t)
        if (in_support_box(static_cast<int>(t), xi)) out.push_back(static_cast<int>(t));
    return out;
}

double Partition::raw_sum(std::span<const double> xi) const {
    double s = 0;
    for (int k : candidates(xi)) s += raw(k, xi);
    return s;
}

double Partition::sum(std::span<const double> xi) const {
    double s = 0;
    for (int k : candidates(xi)) s += member(k, xi);
    return s;
}

MemberFrame Partition::frame(int t) const {
    const Tile& T = dec_.tiles[t];
    const double f = kind_ == PouKind::Normalized ? 1.0 : 2.0;
    MemberFrame fr;
    if (T.a_is_ball) {
        fr.center = {f * pc_[0], f * pc_[1]};
        fr.M = Eigen::MatrixXd::Identity(2, 2) * (f * 2 * kBallSupport * ball_rho_);
    } else {
        fr.center = T.a_center;
        for (double& v : fr.center) v *= f;
        fr.M = f * T.a_edges;
    }
    fr.abs_det = std::abs(fr.M.determinant());
    return fr;
}

PartitionCheck check_partition(const Partition& pou, int grid, std::uint64_t seed) {
    const Decomposition& dec = pou.decomposition();
    const int n = dec.domain.dim;
    if (n > 2) throw std::invalid_argument("partition checks support n <= 2");
    const bool sq = pou.kind() == PouKind::Squared;
    ConvexDomain sup = sq ? dec.domain.scaled(2) : dec.domain;
    WeightField w = normalize(dec.domain, dec.a, seed);
    if (!sq) w = w.scaled(0.5);
    const double cut = std::pow(dec.a, -dec.j_max);
    auto lo = sup.bbox_lo(), hi = sup.bbox_hi();
    PartitionCheck c;
    c.denom_min = c.envelope_min = std::numeric_limits<double>::infinity();
    std::vector<double> x(n);
    const std::size_t total = n == 1 ? grid : static_cast<std::size_t>(grid) * grid;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (int d = n - 1; d >= 0; --d) {
            int k = static_cast<int>(rem % grid);
            rem /= grid;
            x[d] = lo[d] + (k + 0.5) * (hi[d] - lo[d]) / grid;
        }
        ++c.nodes;
        if (!contains(sup, x) || !(w.eval(x) > cut)) continue;
        ++c.covered;
        double s = 0, d = 0;
        for (int k : pou.candidates(x)) {
            double m = pou.member(k, x);
            if (m > 0 && !pou.in_support_box(k, x)) ++c.support_violations;
            s += m;
            if (!sq) d += pou.raw(k, x);
        }
        if (sq) {
            c.envelope_min = std::min(c.envelope_min, s);
            c.envelope_max = std::max(c.envelope_max, s);
        } else {
            c.max_sum_error = std::max(c.max_sum_error, std::abs(s - 1));
            c.denom_min = std::min(c.denom_min, d);
            c.denom_max = std::max(c.denom_max, d);
        }
    }
    return c;
}

L1Estimate l1_norm(const Partition& pou, int t, int n_ref, int pad) {
    MemberFrame fr = pou.frame(t);
    const int n = static_cast<int>(fr.center.size());
    const int cap = n == 1 ? 1 << 16 : 1024;
    std::vector<double> xi(n);
    auto sampler = [&](std::span<const double> u) {
        for (int r = 0; r < n; ++r) {
            double s = fr.center[r];
            for (int k = 0; k < n; ++k) s += fr.M(r, k) * u[k];
            xi[r] = s;
        }
        return cplx(pou.member(t, xi), 0);
    };
    // refine until the outer shell carries under 5e-4 of the mass
    L1Estimate e;
    for (int N = n_ref;; N *= 2) {
        auto tr = unit_transform(n, N, pad, sampler);
        e = {tr.lp_norm(1), tr.shell_fraction(1)};
        if (e.shell <= 5e-4 || 2 * N > cap) break;
    }
    if (e.shell > 1e-3) throw std::runtime_error("L1 tail estimate " + fmt(e.shell) + " exceeds 1e-3: increase R or grid");
    return e;
}

double bump_l1_norm(const BumpProfile& b, int n_ref, int pad) {
    auto tr = unit_transform(1, n_ref, pad, [&](std::span<const double> u) { return cplx(b.eval1d(u[0]), 0); });
    return std::pow(tr.lp_norm(1), b.dim());
}

namespace {

void support_box(const Partition& pou, int t, std::vector<double>& lo, std::vector<double>& hi) {
    MemberFrame fr = pou.frame(t);
    const int n = static_cast<int>(fr.center.size());
    lo.assign(n, 0);
    hi.assign(n, 0);
    for (int k = 0; k < n; ++k) {
        double ext = 0;
        for (int c = 0; c < n; ++c) ext += 0.5 * std::abs(fr.M(k, c));
        lo[k] = fr.center[k] - ext;
        hi[k] = fr.center[k] + ext;
    }
}

}  // namespace

std::vector<PouReportRow> partition_report(const Partition& pou, int n_ref, int pad) {
    std::vector<PouReportRow> rows;
    for (std::size_t t = 0; t < pou.size(); ++t) {
        PouReportRow r;
        r.tile = static_cast<int>(t);
        r.j = pou.level(r.tile);
        r.complete = pou.complete(r.tile);
        if (r.complete) {
            auto e = l1_norm(pou, r.tile, n_ref, pad);
            r.l1 = e.value;
            r.shell = e.shell;
        }
        support_box(pou, r.tile, r.lo, r.hi);
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

constexpr char kPouMagic[8] = {'P', 'W', 'L', 'P', 'O', 'U', '0', '1'};

template <class T>
void put(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw std::runtime_error("truncated partition file");
    return v;
}

nlohmann::json pou_header(const Partition& pou, int grid) {
    const Decomposition& dec = pou.decomposition();
    ConvexDomain sup = pou.kind() == PouKind::Squared ? dec.domain.scaled(2) : dec.domain;
    return {{"version", kArtifactVersion},
            {"kind", to_string(pou.kind())},
            {"bump_epsilon", pou.bump().epsilon()},
            {"decomposition",
             {{"domain", domain_to_json(dec.domain)}, {"j_max", dec.j_max}, {"m", dec.m}, {"epsilon", dec.epsilon}}},
            {"grid", grid},
            {"box_lo", sup.bbox_lo()},
            {"box_hi", sup.bbox_hi()},
            {"members", pou.size()}};
}

}  // namespace

void write_partition(const std::string& path, const Partition& pou, int grid) {
    const int n = pou.decomposition().domain.dim;
    if (n > 2) throw std::invalid_argument("partition files support n <= 2");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    auto hdr = pou_header(pou, grid);
    std::string hs = hdr.dump();
    f.write(kPouMagic, 8);
    put<std::uint64_t>(f, hs.size());
    f.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    auto lo = hdr["box_lo"].get<std::vector<double>>(), hi = hdr["box_hi"].get<std::vector<double>>();
    std::vector<double> step(n);
    for (int d = 0; d < n; ++d) step[d] = (hi[d] - lo[d]) / grid;
    std::vector<double> x(n), slo, shi;
    for (std::size_t t = 0; t < pou.size(); ++t) {
        support_box(pou, static_cast<int>(t), slo, shi);
        std::vector<int> a(n), cnt(n);
        for (int d = 0; d < n; ++d) {
            a[d] = std::max(0, static_cast<int>(std::floor((slo[d] - lo[d]) / step[d] - 0.5)));
            int b = std::min(grid - 1, static_cast<int>(std::ceil((shi[d] - lo[d]) / step[d] - 0.5)));
            cnt[d] = std::max(0, b - a[d] + 1);
        }
        put<std::int32_t>(f, static_cast<std::int32_t>(t));
        put<std::int32_t>(f, n);
        for (int d = 0; d < n; ++d) put<std::int32_t>(f, a[d]);
        for (int d = 0; d < n; ++d) put<std::int32_t>(f, cnt[d]);
        const int c1 = n == 2 ? cnt[1] : 1;
        for (int i = 0; i < cnt[0]; ++i)
            for (int k = 0; k < c1; ++k) {
                x[0] = lo[0] + (a[0] + i + 0.5) * step[0];
                if (n == 2) x[1] = lo[1] + (a[1] + k + 0.5) * step[1];
                put<double>(f, pou.member(static_cast<int>(t), x));
            }
    }
}

Partition read_partition(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, kPouMagic, 8) != 0) throw std::runtime_error(path + " is not a partition file");
    auto len = get<std::uint64_t>(f);
    std::string hs(len, '\0');
    f.read(hs.data(), static_cast<std::streamsize>(len));
    auto hdr = nlohmann::json::parse(hs);
    auto dj = hdr.at("decomposition");
    Decomposition dec = decomposition_from_json(dj);
    PouKind kind = hdr.at("kind").get<std::string>() == "squared" ? PouKind::Squared : PouKind::Normalized;
    Partition pou(std::move(dec), hdr.at("bump_epsilon").get<double>(), kind);
    // spot-check the stored samples of the first members against the rebuilt family
    const int n = pou.decomposition().domain.dim;
    const int grid = hdr.at("grid").get<int>();
    auto lo = hdr["box_lo"].get<std::vector<double>>(), hi = hdr["box_hi"].get<std::vector<double>>();
    std::vector<double> x(n);
    for (std::size_t m = 0; m < std::min<std::size_t>(pou.size(), 4); ++m) {
        int t = get<std::int32_t>(f);
        int nn = get<std::int32_t>(f);
        if (nn != n || t != static_cast<int>(m)) throw std::runtime_error("corrupt partition file");
        std::vector<int> a(n), cnt(n);
        for (int d = 0; d < n; ++d) a[d] = get<std::int32_t>(f);
        for (int d = 0; d < n; ++d) cnt[d] = get<std::int32_t>(f);
        const int c1 = n == 2 ? cnt[1] : 1;
        for (int i = 0; i < cnt[0]; ++i)
            for (int k = 0; k < c1; ++k) {
                double v = get<double>(f);
                x[0] = lo[0] + (a[0] + i + 0.5) * (hi[0] - lo[0]) / grid;
                if (n == 2) x[1] = lo[1] + (a[1] + k + 0.5) * (hi[1] - lo[1]) / grid;
                if (std::abs(pou.member(t, x) - v) > 1e-9)
                    throw std::runtime_error("partition file does not match its construction parameters");
            }
    }
    return pou;
}

}  // namespace pwlab
