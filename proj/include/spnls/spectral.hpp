#pragma once

#include <array>
#include <functional>
#include <vector>

#include "spnls/grid.hpp"

namespace spnls::spectral {

// η¹: even, 1 on |y| ≤ 1, 0 on |y| ≥ 2, transition θ(|y|−1) with
// θ(s) = g(1−s)/(g(s)+g(1−s)), g(s) = e^{−1/s}.
double eta1(double y);
// η⁴(ξ) = Π η¹(ξ_j)².
double eta4(const std::array<double, 4>& xi);
// Radial bump on ℝ⁴: η(x) = η¹(|x|).
double eta_radial(double r);

void require_dyadic(int N, const char* what);

// Dyadic N with P_M = 0 on the lattice for all M > N.
int top_dyadic(const GridSpec& spec);

// Tensor product Π_a w_a(ξ_a) over the lattice, with per-axis weight functions.
rvec separable(const GridSpec& spec, const std::array<std::function<double(double)>, 4>& w);

// Multipliers (in storage order).
rvec le_multiplier(const GridSpec& spec, double N);  // η⁴(ξ/N)
rvec shell_multiplier(const GridSpec& spec, int N);  // P_N, with P_1 = P_{≤1}
rvec tilde_delta_multiplier(const GridSpec& spec, double delta);
rvec nm_multiplier(const GridSpec& spec, int N, int M);
// e^{−it|ξ|²}
cvec propagator_phase(const GridSpec& spec, double t);

Spectrum multiply(const Spectrum& s, const rvec& m);
Field multiply(const Field& f, const rvec& m);

Spectrum project_le_N(const Spectrum& s, int N);
Spectrum project_N(const Spectrum& s, int N);
Spectrum project_cube(const Spectrum& s, const std::array<long long, 4>& z);
Spectrum project_tilde_delta(const Spectrum& s, double delta);
Spectrum project_NM(const Spectrum& s, int N, int M);
Field project_le_N(const Field& f, int N);
Field project_N(const Field& f, int N);

// e^{itΔ}: multiplier e^{−it|ξ|²}.
Spectrum propagate(const Spectrum& s, double t);
Field propagate(const Field& f, double t);

// |f| + Σ_j |∂_j f| with spectral derivatives.
std::vector<double> grad1(const Field& f);

// Spectral partial derivative ∂_axis f.
Field derivative(const Field& f, int axis);

}  // namespace spnls::spectral
