#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "spnls/grid.hpp"
#include "spnls/numtheory.hpp"

namespace spnls::circle {

// Σ_{|n| ≤ 2N} e^{−itn² + ixn} η¹(n/N)², with t reduced modulo 2π.
cplx weyl_sum(double x, double t, int N);

// ∫ e^{−itξ² + ix1ξ} η¹(ξ/N)² dξ by adaptive Gauss–Legendre, panels split at ±N, ±2N and x1/(2t).
cplx line_integral(double x1, double t, int N, bool* converged = nullptr);

// η̂¹(ω) = ∫ η¹(s) e^{−iωs} ds (real, even).
double eta1_hat(double omega);

// Half-width of the time window η¹(2⁵t/2π): 2π·2^{−4}.
double kernel_window();

struct KernelFactors {
    double window = 0.0;
    std::array<cplx, 3> periodic{};  // Weyl sums in x2, x3, x4
    cplx line{};
    bool converged = true;
    cplx value() const;
};

KernelFactors kernel_factors(const std::array<double, 4>& x, double t, int N);
cplx kernel_KN(const std::array<double, 4>& x, double t, int N);

// K_N(·, t) sampled on a grid (x1 in the centered chart).
Field kernel_field(const GridSpec& spec, double t, int N);

struct WeylRow {
    double t = 0.0;
    nt::RationalApprox approx;
    double max_abs = 0.0;  // max over sampled x of |S(x,t)|
    double ratio = 0.0;    // max_abs·√q·(1 + N|β|^{1/2}) / N
};

struct WeylReport {
    int N = 0;
    std::vector<WeylRow> rows;
    double max_ratio = 0.0;
    std::size_t argmax = 0;
    std::string csv() const;
};

// Ratios on the given t-grid; x sampled at 8N equispaced points via FFT.
WeylReport weyl_bound_check(int N, const std::vector<double>& times);

// Uniform t-grid of n points in (0, kernel_window()).
std::vector<double> weyl_times(int n);

// c_m = Σ_{q∈S} Σ_{a∈Z_q,(a,q)=1} e^{−2πima/q} by direct summation (phases reduced exactly).
cplx farey_coefficient(const std::vector<long long>& S, long long m);
// Same coefficient through Ramanujan sums, exact.
long long farey_coefficient_exact(const std::vector<long long>& S, long long m);

// Validates M ≥ 8Q and S ⊆ {1..Q}, then returns c_m.
cplx farey_bump_coeffs(const std::vector<long long>& S, long long M, long long Q, long long m);

struct FareyReport {
    std::vector<long long> S;
    long long M = 0, Q = 0;
    int t_points = 0;
    long long m_max = 0;           // Fourier truncation |m| ≤ m_max
    double tail_estimate = 0.0;    // Σ of |terms| over m_max < |m| ≤ 2m_max
    double max_error = 0.0;        // max_t |LHS − RHS|
    double max_lhs = 0.0;
    long long m_check = 0;
    double max_abs_cm = 0.0;       // over |m| ≤ m_check
    double cm_bound = 0.0;         // 4Q²
    double max_cross_diff = 0.0;   // direct vs Ramanujan c_m
    std::string csv() const;
};

// Both sides of Σ_{q∈S,(a,q)=1} η¹(MQ(t−a/q)) = Σ_m (MQ)^{−1} η̂¹(2πm/MQ) c_m e^{2πimt}
// on t_j = j/t_points.
FareyReport farey_identity_check(const std::vector<long long>& S, long long M, long long Q, int t_points = 4096,
                                 long long m_check = 1000);

struct RamanujanRow {
    long long m = 0;
    long long lhs = 0;  // Σ_{q≤Q} |c_q(m)|
    long long d = 0;    // d(m, Q)
    double ratio = 0.0;
};

struct RamanujanReport {
    long long Q = 0;
    double gamma = 0.0;
    std::vector<RamanujanRow> rows;
    double max_ratio = 0.0;
    long long argmax_m = 0;
    std::string csv() const;
};

// Exhaustive over m ∈ [−m_abs, m_abs].
RamanujanReport ramanujan_bound_check(long long Q, long long m_abs, double gamma);

struct LevelSetReport {
    long long P = 0, Q = 0, D = 0;
    double gamma = 0.0, B = 0.0;
    long long count = 0;  // #{m ∈ {0..P} : d(m,Q) ≥ D}
    double shape = 0.0;   // D^{−B} Q^γ P + Q^B
    double implied_C = 0.0;
    std::string csv() const;
};

LevelSetReport divisor_level_set_check(long long P, long long Q, long long D, double gamma, double B);

struct DecompOptions {
    int guard = 40;  // K²_{N,1} = K_N·η¹(2^{L−guard} t/2π)
    int b = 8;
    double r = 2.0;
    int samples = 10000;
    int unity_points = 1 << 14;
    int fourier_points = 1 << 16;
    std::uint64_t seed = 1;
};

struct KernelSample {
    std::array<double, 4> x{};
    double t = 0.0;
    cplx k{}, k1{}, k2{}, k3{};
};

struct KernelDecomposition {
    int N = 0;
    double lambda = 0.0, p0 = 0.0;
    int K = 0, L = 0;
    int case_tag = 1;
    int guard = 40, b = 8;
    double r = 2.0;
    double delta = 0.01;
    std::vector<KernelSample> samples;
    double max_abs_k = 0.0;
    double sum_identity_error = 0.0;  // max |K¹+K²+K³−K_N| / max|K_N|
    double unity_error = 0.0;         // max |Σp + e − 1|
    double e_min = 0.0;
    double sup_k1 = 0.0;
    double sup_k1_over_lambda2 = 0.0;
    double fourier_k2 = 0.0;        // sup |K̂²|
    double fourier_k2_shape = 0.0;  // λ² N^{2p₀−6} λ^{−p₀}
    double fourier_k3 = 0.0;        // ‖K̂³‖_{L^r}
    double fourier_k3_shape = 0.0;  // λ² (N^{2p₀−6} λ^{−p₀})^{(r−1)/r}
    bool quadrature_ok = true;
    std::vector<std::string> flags;
    std::string csv() const;          // summary
    std::string samples_csv() const;  // x1..x4,t,K,K1,K2,K3 (moduli)
};

// Admissible λ window [N^{(2p₀−6)/(p₀−2)}, 2^{10}N²].
std::array<double, 2> lambda_window(int N, double p0);

// K with N ∈ [2^{K+4}, 2^{K+5}) and L with λ^{p₀−2}N^{6−2p₀} ∈ [2^L, 2^{L+1}).
std::array<int, 2> decomposition_KL(int N, double lambda, double p0);

struct TimeSplit;

// Time multipliers (h1, h2, h3) with K^i = K_N·h_i(t); h1+h2+h3 = 1 on the window.
class Decomposer {
public:
    Decomposer(int N, double lambda, double p0, const DecompOptions& opt = {});
    ~Decomposer();
    Decomposer(const Decomposer&) = delete;
    Decomposer& operator=(const Decomposer&) = delete;

    int K() const;
    int L() const;
    int case_tag() const;
    std::array<double, 3> split(double t) const;
    // Σ_{k,j} p_{k,j}(t) from the individual bumps, and e(t) from the telescoped closed form.
    double sum_p(double t) const;
    double e(double t) const;

private:
    std::unique_ptr<TimeSplit> impl_;
};

KernelDecomposition kernel_decomposition(int N, double lambda, double p0, const DecompOptions& opt = {});

struct DistrOptions {
    int oversample = 2;  // nper = 2N·oversample
    int t_samples = 5;   // cell-centred samples in [−2^{−10}, 2^{−10}]
    int L1 = 1;
    std::uint64_t seed = 1;
};

struct DistrRow {
    int draw = 0;
    double lambda = 0.0;
    double measure = 0.0;  // |S_λ| by cell counting
    double band = 0.0;     // half the measure of cells on the level-set boundary
    double constant = 0.0; // measure / (N^{2p₀−6} λ^{−p₀})
};

struct DistributionalReport {
    int N = 0;
    double p0 = 0.0;
    int draws = 0;
    std::vector<double> lambdas;
    std::vector<DistrRow> rows;
    std::vector<double> max_constant;  // per λ
    double overall_max = 0.0;
    double field_max = 0.0;
    bool monotone = true;
    std::string grid;
    std::vector<std::string> flags;
    std::string csv() const;
};

// count log-spaced λ in the admissible window.
std::vector<double> distributional_lambdas(int N, double p0, int count);

DistributionalReport distributional_check(int N, const std::vector<double>& lambdas, double p0, int draws,
                                          const DistrOptions& opt = {});

}  // namespace spnls::circle
