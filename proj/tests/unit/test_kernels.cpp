#include <doctest.h>

#include <cmath>

#include "spnls/kernels.hpp"
#include "support.hpp"

using namespace spnls;
using testing_support::random_values;

namespace {

rvec random_weights(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.0, 3.0);
    rvec w(n);
    for (auto& x : w) x = ud(rng);
    return w;
}

}  // namespace

TEST_CASE("scalar table is always available") { CHECK(std::string(simd::scalar_table().name) == "scalar"); }

TEST_CASE("avx2 kernels agree with the scalar reference") {
    const simd::KernelTable* v = simd::avx2_table();
    if (!v) {
        MESSAGE("AVX2 not available on this CPU; equivalence test skipped");
        return;
    }
    const auto& s = simd::scalar_table();
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
        CAPTURE(n);
        cvec a = random_values(n, 11), b = random_values(n, 12);
        rvec w = random_weights(n, 13);

        cvec x = a, y = a;
        s.scale_real(x.data(), w.data(), n);
        v->scale_real(y.data(), w.data(), n);
        CHECK(testing_support::max_abs_diff(x, y) <= 1e-15);

        x = a, y = a;
        s.mul_complex(x.data(), b.data(), n);
        v->mul_complex(y.data(), b.data(), n);
        CHECK(testing_support::max_abs_diff(x, y) <= 1e-14);

        x = a, y = a;
        s.axpy(cplx(0.3, -1.2), b.data(), x.data(), n);
        v->axpy(cplx(0.3, -1.2), b.data(), y.data(), n);
        CHECK(testing_support::max_abs_diff(x, y) <= 1e-14);

        double ref2 = s.sum_abs2(a.data(), n);
        CHECK(std::fabs(v->sum_abs2(a.data(), n) - ref2) <= 1e-12 * (1.0 + ref2));
        double ref4 = s.sum_abs4(a.data(), n);
        CHECK(std::fabs(v->sum_abs4(a.data(), n) - ref4) <= 1e-12 * (1.0 + ref4));
        double refw = s.weighted_abs2(a.data(), w.data(), n);
        CHECK(std::fabs(v->weighted_abs2(a.data(), w.data(), n) - refw) <= 1e-12 * (1.0 + refw));
        CHECK(v->max_abs2(a.data(), n) == s.max_abs2(a.data(), n));

        for (double tau : {1e-3, 0.7, -2.5, 40.0}) {
            x = a, y = a;
            s.phase_rotate(x.data(), tau, n);
            v->phase_rotate(y.data(), tau, n);
            CHECK(testing_support::max_abs_diff(x, y) <= 1e-13 * (1.0 + std::fabs(tau)));
        }
    }
}

TEST_CASE("vector sincos is accurate over a wide argument range") {
    const simd::KernelTable* v = simd::avx2_table();
    if (!v) return;
    // z = 1 so the rotation angle is exactly tau and the result is (cos tau, −sin tau).
    for (double tau = -1000.0; tau <= 1000.0; tau += 0.37) {
        cvec z(4, cplx(1.0, 0.0));
        v->phase_rotate(z.data(), tau, 4);
        CHECK(std::fabs(z[0].real() - std::cos(tau)) <= 2e-16 * (1.0 + std::fabs(tau)));
        CHECK(std::fabs(z[0].imag() + std::sin(tau)) <= 2e-16 * (1.0 + std::fabs(tau)));
    }
}

TEST_CASE("phase rotation preserves modulus") {
    cvec a = random_values(257, 5);
    cvec x = a;
    simd::active().phase_rotate(x.data(), 0.9, x.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(x[i]) == doctest::Approx(std::abs(a[i])).epsilon(1e-15));
}

TEST_CASE("non-finite input falls back without corrupting neighbours") {
    cvec a{cplx(1, 0), cplx(NAN, 0), cplx(0.5, 0.5), cplx(2, 0), cplx(1, 1)};
    simd::active().phase_rotate(a.data(), 0.1, a.size());
    CHECK(std::isnan(a[1].real()));
    CHECK(std::abs(a[0]) == doctest::Approx(1.0));
    CHECK(std::abs(a[4]) == doctest::Approx(std::sqrt(2.0)));
}
