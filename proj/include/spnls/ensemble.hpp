#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "spnls/grid.hpp"

// Deterministic data generators shared by tests, scans and the CLI.
namespace spnls::ensemble {

// Engine seeded from (seed, tags...), so every scan point has its own stream.
std::mt19937_64 make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

// A e^{i x·ξ0} with ξ0 = (k1/L1, k2, k3, k4).
Field plane_wave(const GridSpec& spec, cplx A, const std::array<int, 4>& k);

// Complex Gaussian coefficients damped by e^{−|ξ|²/(2σ²)}, cut at Nyquist/2,
// scaled to the requested H¹ norm.
Field smooth_random(const GridSpec& spec, std::uint64_t seed, double sigma, double h1 = 1.0);

enum class DrawKind { Gaussian, Coherent };

// Coefficients w(ξ)·g(ξ) on the support of a real weight w. Gaussian: g complex normal.
// Coherent: g = e^{−i x0·ξ + i t0|ξ|²} + 0.25·(complex normal), which refocuses at (t0, x0).
// Result normalized to unit L² norm (zero if w vanishes).
Spectrum weighted_draw(const GridSpec& spec, const rvec& w, std::mt19937_64& rng, DrawKind kind, double t_lo,
                       double t_hi);

// F^{-1}[η⁴(2ξ)] on the box (frequencies |ξ| ≤ 1), scaled to the requested H¹ norm.
EuclidField band_bump(const EuclidSpec& box, double h1);

// η(|y|/radius) on the box, unnormalized.
EuclidField radial_bump(const EuclidSpec& box, double radius);

}  // namespace spnls::ensemble
