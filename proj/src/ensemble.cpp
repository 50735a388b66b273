#include "spnls/ensemble.hpp"

#include <cmath>
#include <vector>

#include "spnls/error.hpp"
#include "spnls/norms.hpp"
#include "spnls/spectral.hpp"

namespace spnls::ensemble {

std::mt19937_64 make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    for (std::uint64_t t : tags) {
        words.push_back(static_cast<std::uint32_t>(t));
        words.push_back(static_cast<std::uint32_t>(t >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

Field plane_wave(const GridSpec& spec, cplx A, const std::array<int, 4>& k) {
    spec.validate();
    cvec v(spec.size());
    std::size_t idx = 0;
    for (int i1 = 0; i1 < spec.n1; ++i1)
        for (int i2 = 0; i2 < spec.nper; ++i2)
            for (int i3 = 0; i3 < spec.nper; ++i3)
                for (int i4 = 0; i4 < spec.nper; ++i4) {
                    // Integer phase bookkeeping keeps the wave exactly periodic.
                    long long m = (static_cast<long long>(k[1]) * i2 + static_cast<long long>(k[2]) * i3 +
                                   static_cast<long long>(k[3]) * i4) % spec.nper;
                    long long m1 = (static_cast<long long>(k[0]) * i1) % spec.n1;
                    double arg = kTwoPi * static_cast<double>(m) / spec.nper + kTwoPi * static_cast<double>(m1) / spec.n1;
                    v[idx++] = A * cplx(std::cos(arg), std::sin(arg));
                }
    return Field(spec, std::move(v));
}

Field smooth_random(const GridSpec& spec, std::uint64_t seed, double sigma, double h1) {
    require(sigma > 0.0, ErrorKind::OutOfRange, "sigma must be positive");
    auto rng = make_rng(seed, {0x736d6f6f7468ULL});
    std::normal_distribution<double> nd;
    cvec c(spec.size());
    std::size_t idx = 0;
    for (int i1 = 0; i1 < spec.n1; ++i1)
        for (int i2 = 0; i2 < spec.nper; ++i2)
            for (int i3 = 0; i3 < spec.nper; ++i3)
                for (int i4 = 0; i4 < spec.nper; ++i4) {
                    std::array<double, 4> xi{spec.freq(0, i1), spec.freq(1, i2), spec.freq(2, i3), spec.freq(3, i4)};
                    double re = nd(rng), im = nd(rng);
                    bool inside = std::fabs(xi[0]) <= 0.5 * spec.nyquist1();
                    for (int a = 1; a < 4; ++a) inside = inside && std::fabs(xi[a]) <= 0.5 * spec.nyquistp();
                    double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] + xi[3] * xi[3];
                    double w = inside ? std::exp(-k2 / (2.0 * sigma * sigma)) : 0.0;
                    c[idx++] = cplx(re, im) * w;
                }
    Field f = inverse_fourier(Spectrum(spec, std::move(c)));
    double n = norms::h1_norm(f);
    cvec v = f.values();
    for (cplx& z : v) z *= h1 / n;
    return Field(spec, std::move(v));
}

Spectrum weighted_draw(const GridSpec& spec, const rvec& w, std::mt19937_64& rng, DrawKind kind, double t_lo,
                       double t_hi) {
    require(w.size() == spec.size(), ErrorKind::DimensionMismatch, "weight size");
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    std::array<double, 4> x0{};
    double t0 = 0.0;
    if (kind == DrawKind::Coherent) {
        for (int a = 0; a < 4; ++a) x0[a] = ud(rng) * spec.period(a);
        t0 = t_lo + (t_hi - t_lo) * ud(rng);
    }
    cvec c(spec.size());
    std::size_t idx = 0;
    for (int i1 = 0; i1 < spec.n1; ++i1)
        for (int i2 = 0; i2 < spec.nper; ++i2)
            for (int i3 = 0; i3 < spec.nper; ++i3)
                for (int i4 = 0; i4 < spec.nper; ++i4, ++idx) {
                    double re = nd(rng), im = nd(rng);
                    if (w[idx] == 0.0) continue;
                    cplx g(re, im);
                    if (kind == DrawKind::Coherent) {
                        std::array<double, 4> xi{spec.freq(0, i1), spec.freq(1, i2), spec.freq(2, i3), spec.freq(3, i4)};
                        double k2 = 0.0, ph = 0.0;
                        for (int a = 0; a < 4; ++a) {
                            k2 += xi[a] * xi[a];
                            ph -= x0[a] * xi[a];
                        }
                        ph += t0 * k2;
                        g = cplx(std::cos(ph), std::sin(ph)) + 0.25 * g;
                    }
                    c[idx] = w[idx] * g;
                }
    Spectrum s(spec, std::move(c));
    double e = spectral_energy(s);
    if (e > 0.0)
        for (cplx& z : s.coeffs()) z /= std::sqrt(e);
    return s;
}

EuclidField band_bump(const EuclidSpec& box, double h1) {
    require(h1 > 0.0, ErrorKind::OutOfRange, "bump norm must be positive");
    cvec c(box.size());
    std::size_t idx = 0;
    for (int a = 0; a < box.n4; ++a)
        for (int b = 0; b < box.n4; ++b)
            for (int d = 0; d < box.n4; ++d)
                for (int e = 0; e < box.n4; ++e)
                    c[idx++] = spectral::eta4({2 * box.freq(a), 2 * box.freq(b), 2 * box.freq(d), 2 * box.freq(e)});
    EuclidField f = inverse_fourier(EuclidSpectrum(box, std::move(c)));
    double s = h1 / norms::h1_norm(f);
    for (auto& z : f.values()) z *= s;
    return f;
}

EuclidField radial_bump(const EuclidSpec& box, double radius) {
    require(radius > 0.0, ErrorKind::OutOfRange, "bump radius must be positive");
    cvec v(box.size());
    std::size_t idx = 0;
    for (int a = 0; a < box.n4; ++a)
        for (int b = 0; b < box.n4; ++b)
            for (int d = 0; d < box.n4; ++d)
                for (int e = 0; e < box.n4; ++e) {
                    double r = std::hypot(std::hypot(box.coord(a), box.coord(b)), std::hypot(box.coord(d), box.coord(e)));
                    v[idx++] = spectral::eta_radial(r / radius);
                }
    return EuclidField(box, std::move(v));
}

}  // namespace spnls::ensemble
