#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "spnls/circle.hpp"
#include "spnls/csv.hpp"
#include "spnls/ensemble.hpp"
#include "spnls/error.hpp"
#include "spnls/fft.hpp"
#include "spnls/parallel.hpp"
#include "spnls/spectral.hpp"

namespace spnls::circle {

namespace {

using spectral::eta1;

struct Piece {
    int k = 0, j = 0, J = 0;
    bool last = false;  // j = K − k
    double rho = 0.0;
    std::vector<double> low;  // Fourier-side part on U (cosine coefficients, m ≥ 0)
};

double eta_hat0(double w) { return eta1_hat(w) - 0.5 * eta1_hat(0.5 * w); }

}  // namespace

struct TimeSplit {
    int N = 0, K = 0, L = 0, case_tag = 1, guard = 40, b = 8;
    double lambda = 0.0, p0 = 0.0;
    std::vector<Piece> pieces;

    double bump(const Piece& pc, double v) const {
        double s = std::ldexp(v, pc.J);
        return pc.last ? eta1(s) : eta1(s) - eta1(2.0 * s);
    }

    // p_{k,j}(t) with u = t/2π; only the nearest a/q meets the support.
    double p(const Piece& pc, double u) const {
        double s = 0.0;
        for (long long q = 1LL << pc.k; q < (2LL << pc.k); ++q) {
            long long a = std::llround(u * double(q));
            if (std::gcd(a, q) == 1) s += bump(pc, u - double(a) / double(q));
        }
        return s;
    }

    double p_low(const Piece& pc, double u) const {
        if (pc.low.empty()) return 0.0;
        double s = pc.low[0];
        for (std::size_t m = 1; m < pc.low.size(); ++m)
            if (pc.low[m] != 0.0) s += 2.0 * pc.low[m] * std::cos(kTwoPi * double(m) * u);
        return s;
    }

    double e(double u) const {
        double s = 1.0;
        for (int k = 0; k < K; ++k)
            for (long long q = 1LL << k; q < (2LL << k); ++q) {
                long long a = std::llround(u * double(q));
                if (std::gcd(a, q) == 1) s -= eta1(std::ldexp(u - double(a) / double(q), K + k + 10));
            }
        return s;
    }

    double sum_p(double u) const {
        double s = 0.0;
        for (const auto& pc : pieces) s += p(pc, u);
        return s;
    }

    const Piece& base(int k) const {
        for (const auto& pc : pieces)
            if (pc.k == k && pc.j == 0) return pc;
        fail(ErrorKind::InvariantViolation, "missing p_{k,0}");
    }

    double A(double u) const {
        if (L - guard - 1 < 4) return 0.0;
        return eta1(16.0 * u) - eta1(std::ldexp(u, L - guard));
    }

    std::array<double, 3> split(double t) const {
        double u = t / kTwoPi;
        double head = eta1(std::ldexp(u, L - guard));
        double a = A(u);
        if (a == 0.0) return {0.0, head, 0.0};
        double b1 = e(u), b2 = 0.0, b3 = 0.0;
        for (const auto& pc : pieces) {
            double v = p(pc, u);
            if (case_tag == 1) {
                if (2 * pc.j <= L) {
                    b1 += v;
                } else {
                    double r = pc.rho * p(base(pc.k), u);
                    b1 += r;
                    b2 += v - r;
                }
            } else {
                if (2 * pc.j <= L - b) {
                    b1 += v;
                } else {
                    double lo = p_low(pc, u);
                    b2 += v - lo;
                    b3 += lo;
                }
            }
        }
        return {a * b1, head + a * b2, a * b3};
    }
};

std::array<double, 2> lambda_window(int N, double p0) {
    require(p0 > 3.6, ErrorKind::OutOfRange, "p0 must exceed 18/5");
    require(N >= 1, ErrorKind::OutOfRange, "N must be positive");
    return {std::pow(double(N), (2.0 * p0 - 6.0) / (p0 - 2.0)), 1024.0 * double(N) * double(N)};
}

std::array<int, 2> decomposition_KL(int N, double lambda, double p0) {
    require(N >= 32, ErrorKind::OutOfRange, "kernel decomposition needs N >= 32");
    auto w = lambda_window(N, p0);
    require(lambda >= w[0] * (1.0 - 1e-12) && lambda <= w[1] * (1.0 + 1e-12), ErrorKind::OutOfRange,
            "lambda outside [N^{(2p0-6)/(p0-2)}, 2^10 N^2]");
    int lg = 0;
    while ((2LL << lg) <= N) ++lg;
    int K = lg - 4;
    double x = (p0 - 2.0) * std::log2(lambda) + (6.0 - 2.0 * p0) * std::log2(double(N));
    int L = static_cast<int>(std::floor(x + 1e-12));
    require(L >= 0 && L <= 2 * K + 20, ErrorKind::OutOfRange,
            "L=" + std::to_string(L) + " outside [0, 2K+20] for K=" + std::to_string(K));
    return {K, L};
}

Decomposer::Decomposer(int N, double lambda, double p0, const DecompOptions& opt) : impl_(new TimeSplit) {
    require(opt.guard >= -32 && opt.guard <= 64 && opt.b >= 1, ErrorKind::OutOfRange, "guard must lie in [-32, 64] and b >= 1");
    auto [K, L] = decomposition_KL(N, lambda, p0);
    TimeSplit& s = *impl_;
    s.N = N;
    s.K = K;
    s.L = L;
    s.lambda = lambda;
    s.p0 = p0;
    s.guard = opt.guard;
    s.b = opt.b;
    s.case_tag = L <= 2.0 * K - 0.01 * K ? 1 : 2;
    double D = std::exp2((2.0 * K - L) / 4.0);
    for (int k = 0; k < K; ++k)
        for (int j = 0; j <= K - k; ++j) {
            Piece pc;
            pc.k = k;
            pc.j = j;
            pc.last = j == K - k;
            pc.J = pc.last ? 2 * K + 10 : j + K + k + 10;
            pc.rho = pc.last ? std::exp2(-K + k + 1) : std::exp2(-j);
            if (s.case_tag == 2 && 2 * j > L - s.b) {
                long long mmax = 1LL << (j + K + 2 * k);
                pc.low.assign(static_cast<std::size_t>(mmax) + 1, 0.0);
                for (long long m = 0; m <= mmax; ++m) {
                    if (double(nt::divisor_count(m, 2LL << k)) < D) continue;
                    long long c = 0;
                    for (long long q = 1LL << k; q < (2LL << k); ++q) c = nt::checked_add(c, nt::ramanujan_sum(q, m));
                    double w = kTwoPi * double(m) / std::exp2(pc.J);
                    double chi = pc.last ? eta1_hat(w) : eta_hat0(w);
                    pc.low[m] = std::exp2(-pc.J) * double(c) * chi;
                }
            }
            s.pieces.push_back(std::move(pc));
        }
}

Decomposer::~Decomposer() = default;

int Decomposer::K() const { return impl_->K; }
int Decomposer::L() const { return impl_->L; }
int Decomposer::case_tag() const { return impl_->case_tag; }
std::array<double, 3> Decomposer::split(double t) const { return impl_->split(t); }
double Decomposer::sum_p(double t) const { return impl_->sum_p(t / kTwoPi); }
double Decomposer::e(double t) const { return impl_->e(t / kTwoPi); }

std::string KernelDecomposition::csv() const {
    csv::Table tb({"N", "lambda", "p0", "K", "L", "case", "guard", "b", "r", "samples", "max_abs_k",
                   "sum_identity_error", "unity_error", "e_min", "sup_k1", "sup_k1_over_lambda2", "fourier_k2",
                   "fourier_k2_shape", "fourier_k3", "fourier_k3_shape", "quadrature_ok"});
    tb.add({csv::num(N), csv::num(lambda), csv::num(p0), csv::num(K), csv::num(L), csv::num(case_tag), csv::num(guard),
            csv::num(b), csv::num(r), csv::num(samples.size()), csv::num(max_abs_k), csv::num(sum_identity_error),
            csv::num(unity_error), csv::num(e_min), csv::num(sup_k1), csv::num(sup_k1_over_lambda2),
            csv::num(fourier_k2), csv::num(fourier_k2_shape), csv::num(fourier_k3), csv::num(fourier_k3_shape),
            quadrature_ok ? "1" : "0"});
    std::string out = tb.str();
    for (const auto& f : flags) out += "# flag," + f + "\n";
    return out;
}

std::string KernelDecomposition::samples_csv() const {
    csv::Table tb({"x1", "x2", "x3", "x4", "t", "abs_k", "abs_k1", "abs_k2", "abs_k3"});
    for (const auto& s : samples)
        tb.add({csv::num(s.x[0]), csv::num(s.x[1]), csv::num(s.x[2]), csv::num(s.x[3]), csv::num(s.t),
                csv::num(std::abs(s.k)), csv::num(std::abs(s.k1)), csv::num(std::abs(s.k2)), csv::num(std::abs(s.k3))});
    return tb.str();
}

KernelDecomposition kernel_decomposition(int N, double lambda, double p0, const DecompOptions& opt) {
    require(opt.r >= 2.0 && opt.r <= 4.0, ErrorKind::OutOfRange, "r must lie in [2, 4]");
    require(opt.samples >= 1 && opt.unity_points >= 2 && opt.fourier_points >= 16, ErrorKind::OutOfRange,
            "sample counts too small");
    Decomposer dec(N, lambda, p0, opt);
    KernelDecomposition rep;
    rep.N = N;
    rep.lambda = lambda;
    rep.p0 = p0;
    rep.K = dec.K();
    rep.L = dec.L();
    rep.case_tag = dec.case_tag();
    rep.guard = opt.guard;
    rep.b = opt.b;
    rep.r = opt.r;
    if (rep.L - opt.guard - 1 < 4)
        rep.flags.push_back("trivial regime: the l-range 4..L-guard-1 is empty, so K2 = K_N and K1 = K3 = 0");

    double T = kernel_window();
    rep.samples.resize(opt.samples);
    std::vector<char> conv(opt.samples, 1);
    parallel_for(rep.samples.size(), [&](std::size_t i) {
        auto rng = ensemble::make_rng(opt.seed, {0x4b44ULL, static_cast<std::uint64_t>(N), i});
        std::uniform_real_distribution<double> ux(-kTwoPi, kTwoPi), up(-std::numbers::pi, std::numbers::pi),
            ut(-T, T);
        KernelSample s;
        s.x = {ux(rng), up(rng), up(rng), up(rng)};
        s.t = ut(rng);
        KernelFactors f = kernel_factors(s.x, s.t, N);
        conv[i] = f.converged;
        s.k = f.value();
        auto h = dec.split(s.t);
        s.k1 = s.k * h[0];
        s.k2 = s.k * h[1];
        s.k3 = s.k * h[2];
        rep.samples[i] = s;
    });
    rep.quadrature_ok = std::all_of(conv.begin(), conv.end(), [](char c) { return c != 0; });
    if (!rep.quadrature_ok) rep.flags.push_back("line quadrature did not converge at some samples");
    double err = 0.0;
    for (const auto& s : rep.samples) {
        rep.max_abs_k = std::max(rep.max_abs_k, std::abs(s.k));
        rep.sup_k1 = std::max(rep.sup_k1, std::abs(s.k1));
        err = std::max(err, std::abs(s.k1 + s.k2 + s.k3 - s.k));
    }
    rep.sum_identity_error = rep.max_abs_k > 0.0 ? err / rep.max_abs_k : err;
    rep.sup_k1_over_lambda2 = rep.sup_k1 / (lambda * lambda);

    rep.e_min = 1.0;
    for (int i = 0; i < opt.unity_points; ++i) {
        double t = -T + 2.0 * T * i / (opt.unity_points - 1);
        double e = dec.e(t);
        rep.e_min = std::min(rep.e_min, e);
        rep.unity_error = std::max(rep.unity_error, std::fabs(dec.sum_p(t) + e - 1.0));
    }

    // K̂^i(ξ,τ) = (2π)^4 η⁴(ξ/N) H_i(τ+|ξ|²) with H_i the transform of h_i(t)η¹(2⁵t/2π).
    int nf = opt.fourier_points, P = 2 * nf;
    double dt = 2.0 * T / nf, dmu = kTwoPi / (P * dt);
    cvec g2(P, cplx(0.0)), g3(P, cplx(0.0));
    for (int n = 0; n < nf; ++n) {
        double t = -T + dt * n;
        double w = eta1(32.0 * t / kTwoPi);
        if (w == 0.0) continue;
        auto h = dec.split(t);
        g2[n] = h[1] * w;
        g3[n] = h[2] * w;
    }
    int dims[1] = {P};
    fft::transform(g2.data(), dims, fft::Direction::Forward);
    fft::transform(g3.data(), dims, fft::Direction::Forward);
    double c4 = std::pow(kTwoPi, 4);
    double sup2 = 0.0, lr3 = 0.0;
    for (int k = 0; k < P; ++k) {
        sup2 = std::max(sup2, std::abs(g2[k]) * dt);
        lr3 += std::pow(std::abs(g3[k]) * dt, opt.r) * dmu;
    }
    double line_r = 0.0;
    for (int i = 0; i < 4000; ++i) {
        double s = -2.0 + 4.0 * (i + 0.5) / 4000;
        line_r += std::pow(eta1(s), 2.0 * opt.r) * 4.0 / 4000;
    }
    double per_r = 0.0;
    for (int n = -2 * N; n <= 2 * N; ++n) per_r += std::pow(eta1(double(n) / N), 2.0 * opt.r);
    double eta_r = std::pow(N * line_r, 1.0 / opt.r) * std::pow(per_r, 3.0 / opt.r);
    rep.fourier_k2 = c4 * sup2;
    rep.fourier_k3 = c4 * eta_r * std::pow(lr3, 1.0 / opt.r);
    double ratio = std::pow(double(N), 2.0 * p0 - 6.0) * std::pow(lambda, -p0);
    rep.fourier_k2_shape = lambda * lambda * ratio;
    rep.fourier_k3_shape = lambda * lambda * std::pow(ratio, (opt.r - 1.0) / opt.r);
    return rep;
}

}  // namespace spnls::circle
