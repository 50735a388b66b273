#include "spnls/grid.hpp"

#include <cmath>
#include <string>

#include "spnls/error.hpp"
#include "spnls/fft.hpp"
#include "spnls/kernels.hpp"

namespace spnls {

bool is_pow2(long long v) { return v > 0 && (v & (v - 1)) == 0; }

void GridSpec::validate() const {
    require(L1 >= 1, ErrorKind::InvariantViolation, "L1 must be >= 1, got " + std::to_string(L1));
    require(is_pow2(n1) && n1 >= 4, ErrorKind::InvariantViolation,
            "n1 must be a power of two >= 4, got " + std::to_string(n1));
    require(is_pow2(nper) && nper >= 4, ErrorKind::InvariantViolation,
            "nper must be a power of two >= 4, got " + std::to_string(nper));
}

void EuclidSpec::validate() const {
    require(std::isfinite(side) && side > 0.0, ErrorKind::InvariantViolation, "side must be positive");
    require(is_pow2(n4) && n4 >= 8, ErrorKind::InvariantViolation,
            "n4 must be a power of two >= 8, got " + std::to_string(n4));
}

template <class SpecT>
SampleArray<SpecT>::SampleArray(const SpecT& spec, cvec values) : spec_(spec), v_(std::move(values)) {
    spec_.validate();
    require(v_.size() == spec_.size(), ErrorKind::DimensionMismatch,
            "expected " + std::to_string(spec_.size()) + " samples, got " + std::to_string(v_.size()));
    for (const cplx& z : v_)
        require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::InvariantViolation,
                "non-finite sample");
}

template class SampleArray<GridSpec>;
template class SampleArray<EuclidSpec>;

Field Field::zeros(const GridSpec& spec) { return Field(spec, cvec(spec.size())); }
Spectrum Spectrum::zeros(const GridSpec& spec) { return Spectrum(spec, cvec(spec.size())); }
EuclidField EuclidField::zeros(const EuclidSpec& spec) { return EuclidField(spec, cvec(spec.size())); }

namespace {

template <class Out, class In, class SpecT>
Out transform(const In& in, fft::Direction dir, double scale) {
    const SpecT& spec = in.spec();
    cvec v = in.values();
    auto dims = spec.dims();
    fft::transform(v.data(), dims, dir);
    for (cplx& z : v) z *= scale;
    Out out;
    static_cast<SampleArray<SpecT>&>(out) = SampleArray<SpecT>(spec, std::move(v));
    return out;
}

}  // namespace

Spectrum forward_fourier(const Field& f) {
    return transform<Spectrum, Field, GridSpec>(f, fft::Direction::Forward, f.spec().cell_volume());
}

Field inverse_fourier(const Spectrum& s) {
    return transform<Field, Spectrum, GridSpec>(s, fft::Direction::Backward, 1.0 / s.spec().volume());
}

EuclidSpectrum forward_fourier(const EuclidField& f) {
    return transform<EuclidSpectrum, EuclidField, EuclidSpec>(f, fft::Direction::Forward, f.spec().cell_volume());
}

EuclidField inverse_fourier(const EuclidSpectrum& s) {
    return transform<EuclidField, EuclidSpectrum, EuclidSpec>(s, fft::Direction::Backward, 1.0 / s.spec().volume());
}

rvec laplace_symbol(const GridSpec& spec) {
    std::array<rvec, 4> f2;
    for (int a = 0; a < 4; ++a) {
        f2[a].resize(spec.extent(a));
        for (int i = 0; i < spec.extent(a); ++i) f2[a][i] = spec.freq(a, i) * spec.freq(a, i);
    }
    rvec out(spec.size());
    std::size_t idx = 0;
    for (int i1 = 0; i1 < spec.n1; ++i1)
        for (int i2 = 0; i2 < spec.nper; ++i2)
            for (int i3 = 0; i3 < spec.nper; ++i3)
                for (int i4 = 0; i4 < spec.nper; ++i4) out[idx++] = f2[0][i1] + f2[1][i2] + f2[2][i3] + f2[3][i4];
    return out;
}

rvec laplace_symbol(const EuclidSpec& spec) {
    rvec f2(spec.n4);
    for (int i = 0; i < spec.n4; ++i) f2[i] = spec.freq(i) * spec.freq(i);
    rvec out(spec.size());
    std::size_t idx = 0;
    int n = spec.n4;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) out[idx++] = f2[a] + f2[b] + f2[c] + f2[d];
    return out;
}

double spectral_energy(const Spectrum& s) {
    return simd::active().sum_abs2(s.coeffs().data(), s.size()) / s.spec().volume();
}

}  // namespace spnls
