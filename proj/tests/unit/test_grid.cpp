#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <cstring>
#include <fstream>
#include <functional>

#include "spnls/ensemble.hpp"
#include "spnls/error.hpp"
#include "spnls/grid.hpp"
#include "spnls/rescale.hpp"
#include "support.hpp"

using namespace spnls;
using namespace testing_support;

namespace {

const GridSpec kSmall{2, 16, 8};

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("spnls_test_" + name)).string();
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Config;
}

std::size_t index_of(const GridSpec& s, const std::array<int, 4>& k) {
    auto w = [](int v, int n) { return static_cast<std::size_t>(((v % n) + n) % n); };
    return ((w(k[0], s.n1) * s.nper + w(k[1], s.nper)) * s.nper + w(k[2], s.nper)) * s.nper + w(k[3], s.nper);
}

}  // namespace

TEST_CASE("grid spec invariants") {
    CHECK_NOTHROW(kSmall.validate());
    CHECK(kind_of([] { GridSpec{1, 12, 8}.validate(); }) == ErrorKind::InvariantViolation);
    CHECK(kind_of([] { GridSpec{0, 16, 8}.validate(); }) == ErrorKind::InvariantViolation);
    CHECK(kind_of([] { GridSpec{1, 16, 2}.validate(); }) == ErrorKind::InvariantViolation);
    CHECK(kSmall.nyquist() == doctest::Approx(4.0));
    CHECK(kSmall.freq(0, 15) == doctest::Approx(-0.5));
    CHECK(kind_of([] { Field(kSmall, cvec(3)); }) == ErrorKind::DimensionMismatch);
    cvec bad(kSmall.size());
    bad[5] = cplx(NAN, 0);
    CHECK(kind_of([&] { Field(kSmall, bad); }) == ErrorKind::InvariantViolation);
}

TEST_CASE("plane wave has a single coefficient") {
    std::array<int, 4> k{3, -2, 1, 0};
    Field f = ensemble::plane_wave(kSmall, cplx(0.7, 0.2), k);
    Spectrum s = forward_fourier(f);
    std::size_t at = index_of(kSmall, k);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == at)
            CHECK(std::abs(s.coeffs()[i] - cplx(0.7, 0.2) * kSmall.volume()) <= 1e-10 * kSmall.volume());
        else
            CHECK(std::abs(s.coeffs()[i]) <= 1e-10);
    }
}

TEST_CASE("inverse of a single coefficient is a plane wave") {
    std::array<int, 4> k{-1, 3, 0, 2};
    cvec c(kSmall.size());
    c[index_of(kSmall, k)] = kSmall.volume();
    Field f = inverse_fourier(Spectrum(kSmall, c));
    Field g = ensemble::plane_wave(kSmall, 1.0, k);
    CHECK(max_abs_diff(f.values(), g.values()) <= 1e-12);
}

TEST_CASE("zero field transforms to zero") {
    Spectrum s = forward_fourier(Field::zeros(kSmall));
    CHECK(max_abs(s.coeffs()) == 0.0);
}

TEST_CASE("Gaussian matches trapezoid quadrature of the continuum transform") {
    GridSpec spec{16, 512, 4};
    cvec v(spec.size());
    std::size_t per = static_cast<std::size_t>(spec.nper) * spec.nper * spec.nper;
    for (int i1 = 0; i1 < spec.n1; ++i1) {
        double x = spec.coord(0, i1);
        for (std::size_t j = 0; j < per; ++j) v[i1 * per + j] = std::exp(-0.5 * x * x);
    }
    Spectrum s = forward_fourier(Field(spec, v));
    // Oracle: fine trapezoid rule for ∫ e^{−x²/2} e^{−ixξ} dx over the long circle, times (2π)³.
    for (int i1 = 0; i1 < spec.n1; ++i1) {
        double xi = spec.freq(0, i1);
        if (std::fabs(xi) > 4.0) continue;
        const int M = 40000;
        double half = kTwoPi * spec.L1 / 2.0, h = 2.0 * half / M;
        cplx acc = 0.0;
        for (int m = 0; m <= M; ++m) {
            double x = -half + m * h;
            double w = (m == 0 || m == M) ? 0.5 : 1.0;
            acc += w * std::exp(-0.5 * x * x) * cplx(std::cos(x * xi), -std::sin(x * xi));
        }
        cplx ref = acc * h * std::pow(kTwoPi, 3);
        CAPTURE(xi);
        CHECK(std::abs(s.coeffs()[i1 * per] - ref) <= 1e-6 * std::abs(ref) + 1e-12);
    }
}

TEST_CASE("round trip, Parseval and linearity") {
    Field f = random_field(kSmall, 1), g = random_field(kSmall, 2);
    Field back = inverse_fourier(forward_fourier(f));
    CHECK(max_abs_diff(back.values(), f.values()) <= 1e-12 * max_abs(f.values()));
    double l2 = norms::l2_norm(f);
    CHECK(std::fabs(spectral_energy(forward_fourier(f)) - l2 * l2) <= 1e-12 * l2 * l2);

    cplx a(0.3, -1.1), b(-2.0, 0.4);
    cvec comb(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) comb[i] = a * f[i] + b * g[i];
    Spectrum sc = forward_fourier(Field(kSmall, comb));
    Spectrum sf = forward_fourier(f), sg = forward_fourier(g);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        err = std::max(err, std::abs(sc.coeffs()[i] - a * sf.coeffs()[i] - b * sg.coeffs()[i]));
        scale = std::max(scale, std::abs(sc.coeffs()[i]));
    }
    CHECK(err <= 1e-12 * scale);
}

TEST_CASE("translation law") {
    Field f = random_field(kSmall, 3);
    profiles::LatticeShift sh{3, -1, 2, 5};
    profiles::Point x0 = profiles::lattice_point(kSmall, sh);
    Spectrum moved = forward_fourier(profiles::translate(f, sh));
    Spectrum s = forward_fourier(f);
    double err = 0.0, scale = max_abs(s.coeffs());
    std::size_t idx = 0;
    for (int i1 = 0; i1 < kSmall.n1; ++i1)
        for (int i2 = 0; i2 < kSmall.nper; ++i2)
            for (int i3 = 0; i3 < kSmall.nper; ++i3)
                for (int i4 = 0; i4 < kSmall.nper; ++i4, ++idx) {
                    double ph = x0[0] * kSmall.freq(0, i1) + x0[1] * kSmall.freq(1, i2) + x0[2] * kSmall.freq(2, i3) +
                                x0[3] * kSmall.freq(3, i4);
                    err = std::max(err, std::abs(moved.coeffs()[idx] - std::polar(1.0, -ph) * s.coeffs()[idx]));
                }
    CHECK(err <= 1e-10 * scale);
}

TEST_CASE("field file round trip is bit identical") {
    Field f = random_field(kSmall, 4);
    std::string p = tmp_path("rt.bin");
    write_field(f, p);
    std::optional<double> t;
    Field g = read_field(p, &t);
    CHECK(!t.has_value());
    CHECK(g.spec() == f.spec());
    CHECK(std::memcmp(g.values().data(), f.values().data(), f.size() * sizeof(cplx)) == 0);

    write_field(f, p, 0.125);
    read_field(p, &t);
    REQUIRE(t.has_value());
    CHECK(*t == 0.125);

    EuclidField e(EuclidSpec{3.5, 8}, random_values(4096, 9));
    write_euclid_field(e, p);
    EuclidField e2 = read_euclid_field(p);
    CHECK(e2.spec() == e.spec());
    CHECK(std::memcmp(e2.values().data(), e.values().data(), e.size() * sizeof(cplx)) == 0);
    std::remove(p.c_str());
}

TEST_CASE("field file errors") {
    std::string p = tmp_path("bad.bin");
    { std::ofstream(p, std::ios::binary); }
    CHECK(kind_of([&] { read_field(p); }) == ErrorKind::MalformedHeader);
    { std::ofstream(p, std::ios::binary) << "SPNLS1 1 12 8\n"; }
    CHECK(kind_of([&] { read_field(p); }) == ErrorKind::InvariantViolation);
    { std::ofstream(p, std::ios::binary) << "SPNLS1 1 16 8\n" << std::string(100, '\0'); }
    CHECK(kind_of([&] { read_field(p); }) == ErrorKind::TruncatedPayload);
    { std::ofstream(p, std::ios::binary) << "SPNLS1 1 4 4\n" << std::string(256 * 16 + 8, '\0'); }
    CHECK(kind_of([&] { read_field(p); }) == ErrorKind::DimensionMismatch);
    { std::ofstream(p, std::ios::binary) << "NOPE 1 4 4\n"; }
    CHECK(kind_of([&] { read_field(p); }) == ErrorKind::MalformedHeader);
    std::remove(p.c_str());
}
