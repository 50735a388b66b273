#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spnls/grid.hpp"

namespace spnls {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

// Time-sampled solution on an interval.
struct Trajectory {
    GridSpec spec;
    std::vector<double> times;
    std::vector<Field> fields;
    double dt = 0.0;  // integrator step that produced the samples (0 if unknown)

    void validate() const;
    bool uniform(double rel_tol = 1e-9) const;
    Interval span() const { return {times.front(), times.back()}; }
    std::size_t size() const { return times.size(); }
};

}  // namespace spnls

namespace spnls::norms {

struct NormReport {
    std::string name;
    Interval interval;
    double value = 0.0;
    std::vector<std::pair<int, double>> breakdown;  // dyadic N → contribution
    std::vector<std::string> flags;

    // name,t_lo,t_hi,value,N:value,...
    std::string csv_row() const;
};

double l2_norm(const Field& f);
double lp_norm(const Field& f, double p);  // p = +inf for the sup norm
double h1_norm(const Field& f);
double hdot1_norm(const Field& f);
double h1_norm(const Spectrum& s);
double h1_norm(const EuclidField& f);
double hdot1_norm(const EuclidField& f);
double l2_norm(const EuclidField& f);

struct MassEnergy {
    double mass = 0.0;
    double energy = 0.0;
};
MassEnergy mass_energy(const Field& f);
MassEnergy mass_energy(const EuclidField& f);

// Σ_N N²‖P_N f‖⁴_{L⁴} per dyadic N (index i ↔ N = 2^i).
std::vector<double> z_density(const Field& f);

// sup over the dyadic family of subintervals J ⊆ I, |J| ≤ 1, of
// (∫_J Σ_N N²‖P_N u‖⁴_{L⁴} dt)^{1/4}; breakdown^4 sums to value^4.
NormReport z_norm(const Trajectory& u, Interval I);
NormReport z_norm(const Trajectory& u);

// sup_{t∈I} ‖u(t)‖_{H¹}, the X¹ surrogate.
double sup_h1(const Trajectory& u, Interval I);

// ‖u‖_Z^{3/4} · (sup_t ‖u‖_{H¹})^{1/4}
double zprime_norm(const Trajectory& u, Interval I);

// sup_t ‖∫_a^t e^{i(t−s)Δ} h(s) ds‖_{H¹}, cumulative trapezoid in the interaction picture.
NormReport duhamel_norm(const Trajectory& h, Interval I);

// sup_N N^{-1}‖P_N f‖_{L^∞} over all dyadic shells present on the lattice.
double sup_scaled_shell(const Field& f);

// ‖f‖_{L⁴} / [(sup_N N^{-1}‖P_N f‖_∞)^{1/2} ‖f‖_{H¹}^{1/2}]
double refined_sobolev_check(const Field& f);

}  // namespace spnls::norms
