#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>

#include "spnls/aligned.hpp"

namespace spnls {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(long long v);

// Signed frequency / offset index of position i on an n-point periodic axis.
inline int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }

// ℝ×T³ with ℝ replaced by a circle of circumference 2π·L1.
// Layout: x1 slowest, index = ((i1*nper + i2)*nper + i3)*nper + i4.
struct GridSpec {
    int L1 = 4;
    int n1 = 64;
    int nper = 16;

    void validate() const;
    std::size_t size() const { return static_cast<std::size_t>(n1) * nper * nper * nper; }
    std::array<int, 4> dims() const { return {n1, nper, nper, nper}; }
    int extent(int axis) const { return axis == 0 ? n1 : nper; }
    double dx1() const { return kTwoPi * L1 / n1; }
    double dxp() const { return kTwoPi / nper; }
    double dx(int axis) const { return axis == 0 ? dx1() : dxp(); }
    double period(int axis) const { return axis == 0 ? kTwoPi * L1 : kTwoPi; }
    double cell_volume() const { return dx1() * dxp() * dxp() * dxp(); }
    double volume() const { return kTwoPi * L1 * kTwoPi * kTwoPi * kTwoPi; }
    double nyquist1() const { return n1 / (2.0 * L1); }
    double nyquistp() const { return nper / 2.0; }
    double nyquist() const { return nyquist1() < nyquistp() ? nyquist1() : nyquistp(); }
    // Frequency of index i along an axis (ξ1 = k/L1, ξ' = k).
    double freq(int axis, int i) const {
        int k = signed_index(i, extent(axis));
        return axis == 0 ? static_cast<double>(k) / L1 : static_cast<double>(k);
    }
    // Position of index i in the centered chart (−period/2, period/2].
    double coord(int axis, int i) const { return signed_index(i, extent(axis)) * dx(axis); }
    bool operator==(const GridSpec&) const = default;
};

// ℝ⁴ truncated to the periodic box [−side, side)^4 stored in wrapped index order.
struct EuclidSpec {
    double side = kTwoPi;
    int n4 = 16;

    void validate() const;
    std::size_t size() const { return static_cast<std::size_t>(n4) * n4 * n4 * n4; }
    std::array<int, 4> dims() const { return {n4, n4, n4, n4}; }
    double h() const { return 2.0 * side / n4; }
    double dk() const { return std::numbers::pi / side; }
    double cell_volume() const { double v = h(); return v * v * v * v; }
    double volume() const { double v = 2.0 * side; return v * v * v * v; }
    double nyquist() const { return dk() * n4 / 2.0; }
    double freq(int i) const { return signed_index(i, n4) * dk(); }
    double coord(int i) const { return signed_index(i, n4) * h(); }
    bool operator==(const EuclidSpec&) const = default;
};

template <class SpecT>
class SampleArray {
public:
    SampleArray() = default;
    SampleArray(const SpecT& spec, cvec values);

    const SpecT& spec() const { return spec_; }
    std::size_t size() const { return v_.size(); }
    const cvec& values() const { return v_; }
    cvec& values() { return v_; }
    const cplx& operator[](std::size_t i) const { return v_[i]; }

protected:
    SpecT spec_{};
    cvec v_;
};

class Field : public SampleArray<GridSpec> {
public:
    using SampleArray::SampleArray;
    static Field zeros(const GridSpec& spec);
};

class Spectrum : public SampleArray<GridSpec> {
public:
    using SampleArray::SampleArray;
    static Spectrum zeros(const GridSpec& spec);
    const cvec& coeffs() const { return v_; }
    cvec& coeffs() { return v_; }
};

class EuclidField : public SampleArray<EuclidSpec> {
public:
    using SampleArray::SampleArray;
    static EuclidField zeros(const EuclidSpec& spec);
};

class EuclidSpectrum : public SampleArray<EuclidSpec> {
public:
    using SampleArray::SampleArray;
    const cvec& coeffs() const { return v_; }
    cvec& coeffs() { return v_; }
};

// Forward: F(ξ) = Σ_x f(x) e^{−i x·ξ} dV, a Riemann sum of ∫ f e^{−ixξ} dx.
// Inverse: f(x) = vol^{-1} Σ_ξ F(ξ) e^{i x·ξ}, vol = (2π)^4 L1 (resp. (2·side)^4).
Spectrum forward_fourier(const Field& f);
Field inverse_fourier(const Spectrum& s);
EuclidSpectrum forward_fourier(const EuclidField& f);
EuclidField inverse_fourier(const EuclidSpectrum& s);

// |ξ|² over the lattice in storage order.
rvec laplace_symbol(const GridSpec& spec);
rvec laplace_symbol(const EuclidSpec& spec);

// Σ|F|²/vol, equal to ∫|f|² by Plancherel.
double spectral_energy(const Spectrum& s);

// Field files: "SPNLS1 <L1> <n1> <nper>[ <t>]\n" then little-endian float64 (re, im) pairs.
void write_field(const Field& f, const std::string& path, std::optional<double> t = std::nullopt);
Field read_field(const std::string& path, std::optional<double>* t = nullptr);
void write_euclid_field(const EuclidField& f, const std::string& path);
EuclidField read_euclid_field(const std::string& path);

}  // namespace spnls
