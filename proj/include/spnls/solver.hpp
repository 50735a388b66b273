#pragma once

#include <string>
#include <vector>

#include "spnls/grid.hpp"
#include "spnls/norms.hpp"

namespace spnls::solver {

enum class Scheme { Strang, Picard };

struct SolveConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::Strang;
    double tol = 1e-10;
    int max_iter = 50;
    int record_stride = 1;
    double rho = 1.0;              // (i∂t + Δ)u = ρ u|u|², ρ ∈ [−1, 1]
    double resolution_tol = 1e-8;  // admissible H¹ fraction above Nyquist/2

    void validate() const;
};

// Fraction of H¹ energy carried by coefficients with max_j |ξ_j|/Nyquist_j > 1/2.
double resolution_tail(const Field& f);
double resolution_tail(const EuclidField& f);
void check_resolution(const Field& f, double tol);

// Strang splitting N(dt/2) L(dt) N(dt/2) from t = 0 to T ≥ 0.
// The step is T/ceil(T/dt) so the final sample lands on T.
Trajectory evolve(const Field& u0, double T, const SolveConfig& cfg);

// Solution values at the requested times (any sign), starting from u0 at t0.
// Steps never exceed |cfg.dt| and land exactly on each requested time.
std::vector<Field> evolve_at(const Field& u0, double t0, const std::vector<double>& times, const SolveConfig& cfg);
std::vector<EuclidField> evolve_at(const EuclidField& v0, double t0, const std::vector<double>& times,
                                   const SolveConfig& cfg);

struct PicardResult {
    Trajectory trajectory;
    std::vector<double> differences;  // sup-H¹ distance between successive iterates
    std::vector<double> ratios;       // differences[k] / differences[k−1]
    int iterations = 0;
    double linear_zprime = 0.0;       // ‖e^{itΔ}u0‖_{Z′(I)}
    double duhamel_residual = 0.0;    // sup-H¹ of Φ(u) − u
};

// Fixed point of Φ(v) = e^{i(t−a)Δ}u0 − iρ∫_a^t e^{i(t−s)Δ}(v|v|²) ds on I = [a, b].
PicardResult picard_solve(const Field& u0, Interval I, const SolveConfig& cfg);

// sup_t ‖Φ(u)(t) − u(t)‖_{H¹} for a sampled trajectory.
double duhamel_residual(const Trajectory& u, const Field& u0, double rho);

struct ConservationRow {
    double t;
    double mass;
    double energy;
};
struct ConservationTable {
    std::vector<ConservationRow> rows;
    double mass_drift = 0.0;    // max |M(t) − M(0)| / M(0)
    double energy_drift = 0.0;  // max |E(t) − E(0)| / E(0)
};
ConservationTable check_conservation(const Trajectory& u);

// e = (i∂t + Δ)u − ρ u|u|² by centered differences at interior samples.
Trajectory equation_residual(const Trajectory& u, double rho);

struct StabilityReport {
    double eps_in = 0.0;         // ‖u0 − base(t0)‖_{H¹} + duhamel_norm(e)
    double data_term = 0.0;
    double forcing_term = 0.0;
    double deviation = 0.0;      // sup_t ‖u − base‖_{H¹}
    double amplification = 0.0;  // deviation / eps_in (0 when eps_in = 0)
};
StabilityReport stability_experiment(const Trajectory& base, const Trajectory& e, const Field& u0,
                                     const SolveConfig& cfg);

struct EuclidComparison {
    double N = 0.0;
    double R = 0.0;
    double T0 = 0.0;
    std::vector<double> times;        // torus times in [−T0 N^{-2}, T0 N^{-2}]
    std::vector<double> discrepancy;  // ‖U_N(t) − V_{R,N}(t)‖_{H¹}
    double sup_discrepancy = 0.0;
    double torus_tail = 0.0;
    double box_tail = 0.0;
    bool support_condition = false;   // N ≥ 10R
    std::vector<std::string> flags;
};

struct EuclidOptions {
    GridSpec torus{1, 32, 32};
    EuclidSpec box{12.0, 32};
    int samples = 8;        // per half-window
    double max_tail = 0.25; // abort above this resolution tail; flag above cfg.resolution_tol
};

// U_N from f_N = T_N φ on ℝ×T³ against V_{R,N} built from the ℝ⁴ box solution.
// The torus step is cfg.dt and the box step cfg.dt·N², so both runs use the
// same rescaled splitting.
EuclidComparison euclidean_comparison(const EuclidField& phi, double N, double R, double T0,
                                      const SolveConfig& cfg, const EuclidOptions& opt = {});

struct BlowupSeries {
    std::vector<Interval> pieces;
    std::vector<double> z;
    bool growth_flag = false;
    double growth_factor = 10.0;
};
BlowupSeries blowup_monitor(const Trajectory& u, int pieces = 8, double growth_factor = 10.0);

}  // namespace spnls::solver
