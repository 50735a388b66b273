#pragma once

#include <array>
#include <vector>

#include "spnls/grid.hpp"

// Transfer operators between ℝ×T³ and ℝ⁴: translations, the Schrödinger
// modulation Π, the critical rescaling T_N and its inverse pullback.
namespace spnls::profiles {

using Point = std::array<double, 4>;
using LatticeShift = std::array<int, 4>;

// Lattice shift of a grid-aligned point; off-lattice points raise OutOfRange.
LatticeShift to_lattice(const GridSpec& spec, const Point& x0);
Point lattice_point(const GridSpec& spec, const LatticeShift& s);

// Distance on ℝ×T³ (periodic in all four directions of the surrogate).
double torus_distance(const GridSpec& spec, const Point& a, const Point& b);

// (π_{x0} f)(x) = f(x − x0)
Field translate(const Field& f, const Point& x0);
Field translate(const Field& f, const LatticeShift& s);
// Π_{t0,x0} f = π_{x0} e^{−it0Δ} f
Field modulate_translate(const Field& f, double t0, const Point& x0);

// Values of the band-limited interpolant of a sampled field at the tensor
// product of per-axis point lists (output row-major over the lists).
cvec tensor_eval(const Field& f, const std::array<std::vector<double>, 4>& pts);
cvec tensor_eval(const EuclidField& f, const std::array<std::vector<double>, 4>& pts);

// T_N φ(x) = N η(N x / N^{1/2}) φ(N x) in centered chart coordinates.
Field rescale_TN(const EuclidField& phi, double N, const GridSpec& spec);

// Sample N·η(Nx/R)·v(Nx) on the torus (R ≤ 0: no window, the whole box).
// With periodize, supports wider than the fundamental domain are summed over
// their periodic images; otherwise they raise OutOfRange.
Field transfer_to_torus(const EuclidField& v, double N, double R, const GridSpec& spec, bool periodize = false);

// φ(y) = N^{-1} η⁴(y/R) f(x0 + y/N) on a Euclidean box.
EuclidField pullback(const Field& f, double N, double R, const Point& x0, const EuclidSpec& box);

// Box field η(y/R)·v(y)
EuclidField window(const EuclidField& v, double R);

}  // namespace spnls::profiles
