#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spnls/grid.hpp"

namespace spnls::strichartz {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms of the log residuals
};
// Least squares of log y against log x.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct ScanPoint {
    double N = 0.0;
    int draw = 0;
    double raw = 0.0;       // measured quantity before the predicted power is divided out
    double constant = 0.0;  // raw / N^{predicted_exponent} (or the scan-specific normalization)
};

struct ScalingReport {
    std::string name;
    double p = 0.0;
    double predicted_exponent = 0.0;
    std::vector<double> Ns;
    std::vector<ScanPoint> points;
    std::vector<double> max_raw;       // per N
    std::vector<double> max_constant;  // per N
    LineFit fit;                       // log max_raw against log N
    int ensemble = 0;
    std::string grid;
    std::vector<std::string> flags;

    double max_over_grid() const;
    double constant_spread() const;  // max/min of max_constant over N
    // p,N,draw,raw,constant rows then a summary row with slope and residual.
    std::string csv() const;
};

struct ScanOptions {
    int L1 = 1;                // long-circle factor of the per-N grids (power of two)
    int time_samples = 128;    // trapezoid nodes on [t_lo, t_hi]
    double t_lo = -1.0;
    double t_hi = 1.0;
    std::uint64_t seed = 1;
};

// Grid with Nyquist 2N in every direction: nper = 4N, n1 = 4N·L1.
GridSpec scan_grid(int N, int L1);

// ‖e^{itΔ}f‖_{L^p(ℝ×T³×[t_lo,t_hi])} with trapezoid time quadrature on the given nodes.
double spacetime_lp(const Spectrum& f, double p, const std::vector<double>& times);

// Uniform nodes on [lo, hi].
std::vector<double> uniform_times(double lo, double hi, int n);

// Max over a mixed ensemble of ‖e^{itΔ}P_N f‖_{L^p} / N^{2−6/p}, ‖f‖₂ = 1, f supported in shell N.
ScalingReport strichartz_scan(double p, const std::vector<int>& Ns, int ensemble, const ScanOptions& opt = {});

// sup_t ‖e^{itΔ}P_N f‖_∞ |t|^{1/2} / (N³‖f‖₁), t log-spaced in [t_lo, t_hi] ⊂ (0, ∞).
// Draw 0 is a single-site delta; other draws are signed sums of four deltas.
ScalingReport dispersive_scan(const std::vector<int>& Ns, double t_lo, double t_hi, int family, int t_samples = 64,
                              const ScanOptions& opt = {});

// sup_{x1} ‖P_K e^{itΔ} P̃_δ φ‖_{L²(T³×[t_lo,t_hi])} / [(δK)^{−1/2}‖φ‖₂]
double local_smoothing_check(const Field& phi, double delta, int K, const ScanOptions& opt = {});
ScalingReport local_smoothing_scan(double delta, const std::vector<int>& Ks, int ensemble, const ScanOptions& opt = {});

struct BilinearPoint {
    int N1 = 0;
    int N2 = 0;
    double product = 0.0;  // max over draws of ‖u1u2‖_{L²}
    double ratio = 0.0;    // max over draws of ‖u1u2‖_{L²} / (‖f1‖₂ ‖u2‖_{Z′})
    double gain = 0.0;     // N2/N1 + 1/N2
};
struct BilinearReport {
    std::vector<BilinearPoint> points;
    LineFit fit;       // log ratio against log gain; slope = empirical κ
    double kappa = 0.0;
    int ensemble = 0;
    std::vector<std::string> flags;
    std::string csv() const;
};
// Pairs N1 ≥ N2 from Ns; free waves on [0, 1] sampled at opt.time_samples nodes.
BilinearReport bilinear_scan(const std::vector<int>& Ns, int ensemble, const ScanOptions& opt = {});
// Explicit (N1, N2) pairs, N1 ≥ N2.
BilinearReport bilinear_scan(const std::vector<std::pair<int, int>>& pairs, int ensemble, const ScanOptions& opt = {});

struct ExtinctionReport {
    double N = 0.0;
    double T1 = 0.0;
    double core = 0.0;                                // T1 N^{-2}
    double z_outside = 0.0;                           // Z over [−1,1] ∖ (−core, core)
    std::vector<std::pair<int, double>> shell_l6;     // M → ‖P_M e^{itΔ}ψ̃_N‖_{L⁶} outside the core
    std::vector<std::string> flags;
    std::string csv() const;
};
// ψ̃_N = T_N ψ on the torus; samples per side of the core.
ExtinctionReport extinction_check(const EuclidField& psi, double N, double T1, const GridSpec& torus, int samples = 32);

}  // namespace spnls::strichartz
