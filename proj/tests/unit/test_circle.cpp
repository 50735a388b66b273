#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "spnls/circle.hpp"
#include "spnls/error.hpp"
#include "spnls/numtheory.hpp"

using namespace spnls;
using namespace spnls::circle;

namespace {

double ref_eta1(double y) {
    double a = std::fabs(y);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    double s = a - 1.0;
    double g1 = std::exp(-1.0 / (1.0 - s)), g0 = std::exp(-1.0 / s);
    return g1 / (g0 + g1);
}

cplx ref_weyl(double x, double t, int N) {
    cplx s = 0.0;
    for (int n = -2 * N; n <= 2 * N; ++n) {
        double w = ref_eta1(double(n) / N);
        s += w * w * std::polar(1.0, -t * double(n) * n + x * n);
    }
    return s;
}

// Trapezoid rule; spectrally accurate for smooth compactly supported integrands.
cplx ref_line(double x1, double t, int N, int pts) {
    double lo = -2.0 * N, h = 4.0 * N / pts;
    cplx s = 0.0;
    for (int i = 0; i <= pts; ++i) {
        double xi = lo + h * i;
        double w = ref_eta1(xi / N);
        s += w * w * std::polar(1.0, -t * xi * xi + x1 * xi);
    }
    return s * h;
}

double ref_eta_hat(double w) {
    const int pts = 200000;
    double h = 4.0 / pts, s = 0.0;
    for (int i = 0; i <= pts; ++i) {
        double y = -2.0 + h * i;
        s += ref_eta1(y) * std::cos(w * y);
    }
    return s * h;
}

long long ref_phi(long long n) {
    long long c = 0;
    for (long long a = 1; a <= n; ++a) c += std::gcd(a, n) == 1;
    return c;
}

double ref_ramanujan(long long q, long long m) {
    double s = 0.0;
    for (long long a = 1; a <= q; ++a)
        if (std::gcd(a, q) == 1) s += std::cos(kTwoPi * double((a * m) % q) / double(q));
    return s;
}

}  // namespace

TEST_CASE("weyl sum matches direct summation and its symmetries") {
    for (int N : {4, 16, 37}) {
        for (double t : {0.0, 0.013, 0.3, 2.1}) {
            for (double x : {0.0, 0.7, -2.5}) {
                cplx a = weyl_sum(x, t, N), b = ref_weyl(x, t, N);
                CHECK(std::abs(a - b) < 1e-10 * N);
                CHECK(std::abs(weyl_sum(-x, t, N) - a) < 1e-10 * N);
                CHECK(std::abs(weyl_sum(x + kTwoPi, t, N) - a) < 1e-9 * N);
                CHECK(std::abs(weyl_sum(x, t + kTwoPi, N) - a) < 1e-9 * N);
            }
        }
    }
}

TEST_CASE("line integral against a fine trapezoid rule") {
    bool ok = false;
    for (int N : {8, 32}) {
        for (double t : {0.0, 0.004, 0.05, -0.2}) {
            for (double x1 : {0.0, 3.0, -40.0}) {
                cplx a = line_integral(x1, t, N, &ok), b = ref_line(x1, t, N, 400000);
                CHECK(ok);
                CHECK(std::abs(a - b) < 1e-8 * N);
            }
        }
    }
}

TEST_CASE("eta1 hat against quadrature") {
    for (double w : {0.0, 0.5, 3.0, 17.0, 250.0, 1500.0}) CHECK(std::fabs(eta1_hat(w) - ref_eta_hat(w)) < 1e-9);
    CHECK(eta1_hat(-3.0) == doctest::Approx(eta1_hat(3.0)).epsilon(1e-14));
}

TEST_CASE("kernel factorizes and vanishes outside the time window") {
    const int N = 16;
    std::array<double, 4> x{0.4, -1.0, 2.0, 0.3};
    double T = kernel_window();
    CHECK(T == doctest::Approx(kTwoPi / 16.0));
    CHECK(std::abs(kernel_KN(x, T * 1.0001, N)) == 0.0);
    CHECK(std::abs(kernel_KN(x, -T * 1.5, N)) == 0.0);
    double t = 0.07;
    cplx want = ref_eta1(32.0 * t / kTwoPi) * ref_weyl(x[1], t, N) * ref_weyl(x[2], t, N) * ref_weyl(x[3], t, N) *
                ref_line(x[0], t, N, 200000);
    cplx got = kernel_KN(x, t, N);
    CHECK(std::abs(got - want) < 1e-9 * std::abs(want) + 1e-9);
    KernelFactors f = kernel_factors(x, t, N);
    CHECK(std::abs(f.value() - got) < 1e-12 * std::abs(got));

    std::array<double, 4> zero{0.0, 0.0, 0.0, 0.0};
    double s = 0.0;
    for (int n = -2 * N; n <= 2 * N; ++n) s += std::pow(ref_eta1(double(n) / N), 2);
    double line = ref_line(0.0, 0.0, N, 200000).real();
    CHECK(kernel_KN(zero, 0.0, N).real() == doctest::Approx(s * s * s * line).epsilon(1e-10));
}

TEST_CASE("kernel field samples the kernel") {
    GridSpec spec{1, 8, 8};
    Field f = kernel_field(spec, 0.05, 4);
    std::size_t idx = 0;
    bool ok = true;
    for (int i1 = 0; i1 < spec.n1; ++i1)
        for (int i2 = 0; i2 < spec.nper; ++i2)
            for (int i3 = 0; i3 < spec.nper; ++i3)
                for (int i4 = 0; i4 < spec.nper; ++i4, ++idx) {
                    std::array<double, 4> x{spec.coord(0, i1), spec.coord(1, i2), spec.coord(2, i3), spec.coord(3, i4)};
                    if (std::abs(f[idx] - kernel_KN(x, 0.05, 4)) > 1e-9) ok = false;
                }
    CHECK(ok);
}

TEST_CASE("dirichlet approximation") {
    auto r = nt::dirichlet_approx(std::numbers::pi * kTwoPi, 2);
    CHECK(nt::dirichlet_valid(r, std::numbers::pi * kTwoPi, 2));
    auto third = nt::dirichlet_approx(kTwoPi / 3.0, 10);
    CHECK(third.a == 1);
    CHECK(third.q == 3);
    CHECK(std::fabs(third.beta) < 1e-15);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    const long long N = 64;
    for (int i = 0; i < 200; ++i) {
        double t = u(rng);
        auto a = nt::dirichlet_approx(t, N);
        CHECK(a.q >= 1);
        CHECK(a.q <= N);
        CHECK(std::gcd(a.a, a.q) == 1);
        double alpha = t / kTwoPi;
        CHECK(std::fabs(alpha - double(a.a) / double(a.q)) <= 1.0 / double(N * a.q) + 1e-12);
        bool exists = false;
        for (long long q = 1; q <= N && !exists; ++q) {
            long long p = std::llround(alpha * q);
            exists = std::fabs(alpha - double(p) / q) <= 1.0 / double(N * q);
        }
        CHECK(exists);
    }
    CHECK_THROWS_AS(nt::dirichlet_approx(1.0, 0), Error);
}

TEST_CASE("weyl bound ratio near a major arc") {
    auto rep = weyl_bound_check(64, {kTwoPi / 3.0});
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].approx.q == 3);
    double direct = 0.0;
    for (int i = 0; i < 512; ++i) direct = std::max(direct, std::abs(ref_weyl(kTwoPi * i / 512.0, kTwoPi / 3.0, 64)));
    CHECK(rep.rows[0].max_abs == doctest::Approx(direct).epsilon(1e-9));
    CHECK(rep.rows[0].ratio > 0.3);
    CHECK(rep.rows[0].ratio < 5.0);

    auto a = weyl_bound_check(32, weyl_times(40)), b = weyl_bound_check(128, weyl_times(40));
    CHECK(a.max_ratio < 2.0 * b.max_ratio);
    CHECK(b.max_ratio < 2.0 * a.max_ratio);
    CHECK(a.csv().find("ratio") != std::string::npos);
}

TEST_CASE("farey coefficients") {
    for (long long m = -10; m <= 10; ++m) {
        CHECK(std::abs(farey_coefficient({1}, m) - cplx(1.0)) < 1e-12);
        CHECK(std::abs(farey_coefficient({2}, m) - cplx(m % 2 == 0 ? 1.0 : -1.0)) < 1e-12);
    }
    std::vector<long long> S{1, 3, 4, 7, 9, 12};
    for (long long m = -40; m <= 40; ++m) {
        double want = 0.0;
        for (long long q : S) want += ref_ramanujan(q, ((m % q) + q) % q);
        CHECK(double(farey_coefficient_exact(S, m)) == doctest::Approx(want).epsilon(1e-12));
        CHECK(std::abs(farey_coefficient(S, m) - cplx(want)) < 1e-10);
        CHECK(std::abs(farey_coefficient(S, m)) <= 4.0 * 12 * 12);
    }
    CHECK_THROWS_AS(farey_bump_coeffs(S, 10, 12, 1), Error);
    CHECK_THROWS_AS(farey_bump_coeffs({13}, 200, 12, 1), Error);
    CHECK(std::abs(farey_bump_coeffs(S, 96, 12, 5) - cplx(double(farey_coefficient_exact(S, 5)))) < 1e-10);
}

TEST_CASE("farey identity") {
    auto rep = farey_identity_check({1, 2, 3, 4}, 32, 4, 1024, 200);
    CHECK(rep.max_error < 1e-8);
    CHECK(rep.max_lhs > 0.5);
    CHECK(rep.tail_estimate < 1e-10);
    CHECK(rep.max_abs_cm <= rep.cm_bound);
    CHECK(rep.cm_bound == doctest::Approx(64.0));
    CHECK(rep.max_cross_diff < 1e-9);

    double lhs = 0.0, t = 0.37;
    for (long long q = 1; q <= 4; ++q)
        for (long long a = -q; a <= 2 * q; ++a)
            if (std::gcd(a, q) == 1) lhs += ref_eta1(128.0 * (t - double(a) / q));
    double rhs = 0.0;
    for (long long m = -4000; m <= 4000; ++m)
        rhs += eta1_hat(kTwoPi * m / 128.0) / 128.0 * double(farey_coefficient_exact({1, 2, 3, 4}, m)) *
               std::cos(kTwoPi * m * t);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
}

TEST_CASE("divisor counts and ramanujan sums") {
    CHECK(nt::divisor_count(12, 4) == 4);
    CHECK(nt::divisor_count(1, 50) == 1);
    CHECK(nt::divisor_count(0, 7) == 7);
    CHECK(nt::divisor_count(-12, 4) == 4);
    auto d = nt::divisor_counts(300, 17);
    for (long long m = 0; m <= 300; ++m) {
        long long c = 0;
        for (long long q = 1; q <= 17; ++q) c += (m % q == 0);
        CHECK(d[m] == c);
    }
    for (long long q = 1; q <= 30; ++q) {
        CHECK(nt::euler_phi(q) == ref_phi(q));
        for (long long m = 0; m <= 30; ++m) CHECK(double(nt::ramanujan_sum(q, m)) == doctest::Approx(ref_ramanujan(q, m)));
    }
    CHECK(nt::mobius(30) == -1);
    CHECK(nt::mobius(12) == 0);
    CHECK_THROWS_AS(nt::checked_mul(1LL << 40, 1LL << 40), Error);
}

TEST_CASE("ramanujan bound check") {
    auto one = ramanujan_bound_check(1, 50, 0.1);
    CHECK(one.max_ratio == doctest::Approx(1.0));
    auto rep = ramanujan_bound_check(64, 200, 0.1);
    CHECK(rep.rows.size() == 401);
    long long phis = 0;
    for (long long q = 1; q <= 64; ++q) phis += ref_phi(q);
    for (const auto& r : rep.rows)
        if (r.m == 0) {
            CHECK(r.lhs == phis);
            CHECK(r.d == 64);
        }
    CHECK(rep.max_ratio > 0.0);
    CHECK(std::isfinite(rep.max_ratio));
}

TEST_CASE("divisor level set") {
    auto all = divisor_level_set_check(500, 16, 1, 0.1, 2.0);
    CHECK(all.count == 501);
    auto rep = divisor_level_set_check(10000, 32, 6, 0.1, 2.0);
    long long c = 0;
    for (long long m = 0; m <= 10000; ++m) {
        long long k = 0;
        for (long long q = 1; q <= 32; ++q) k += (m % q == 0);
        c += k >= 6;
    }
    CHECK(rep.count == c);
    CHECK(rep.implied_C == doctest::Approx(double(c) / rep.shape));
}

TEST_CASE("decomposition parameters") {
    CHECK_THROWS_AS(decomposition_KL(16, 100.0, 4.0), Error);
    auto w = lambda_window(64, 4.0);
    CHECK(w[0] == doctest::Approx(std::pow(64.0, 1.0)));
    CHECK(w[1] == doctest::Approx(1024.0 * 64 * 64));
    CHECK_THROWS_AS(decomposition_KL(64, w[0] * 0.5, 4.0), Error);
    CHECK_THROWS_AS(decomposition_KL(64, w[1] * 2.0, 4.0), Error);
    CHECK_THROWS_AS(lambda_window(64, 3.5), Error);
    auto kl = decomposition_KL(64, 4096.0, 4.0);
    CHECK(kl[0] == 2);
    double x = 2.0 * std::log2(4096.0) - 2.0 * 6.0;
    CHECK(kl[1] == int(std::floor(x)));
}

TEST_CASE("partition of unity and time split") {
    struct Cfg {
        int N;
        double lambda;
        int guard;
        int expect_case;
    };
    double lo = lambda_window(64, 4.0)[0];
    for (Cfg c : {Cfg{64, lo, -5, 1}, Cfg{64, lo * 8.0, 0, 2}, Cfg{64, lo * 64.0, 40, 2}}) {
        DecompOptions opt;
        opt.guard = c.guard;
        Decomposer dec(c.N, c.lambda, 4.0, opt);
        CHECK(dec.case_tag() == c.expect_case);
        double T = kernel_window();
        double worst = 0.0, unity = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            double t = -T + 2.0 * T * i / 4000.0;
            auto h = dec.split(t);
            worst = std::max(worst, std::fabs(h[0] + h[1] + h[2] - 1.0));
            unity = std::max(unity, std::fabs(dec.sum_p(t) + dec.e(t) - 1.0));
        }
        CHECK(worst < 1e-12);
        CHECK(unity < 1e-12);
    }
}

TEST_CASE("kernel decomposition report") {
    DecompOptions opt;
    opt.samples = 200;
    opt.unity_points = 2000;
    opt.fourier_points = 1 << 12;
    auto rep = kernel_decomposition(64, 4096.0, 4.0, opt);
    CHECK(rep.sum_identity_error < 1e-12);
    CHECK(rep.unity_error < 1e-12);
    CHECK(rep.quadrature_ok);
    CHECK(rep.samples.size() == 200);
    CHECK(!rep.flags.empty());
    CHECK(rep.sup_k1 == 0.0);

    opt.guard = 0;
    double lo = lambda_window(64, 4.0)[0];
    auto c2 = kernel_decomposition(64, lo * 8.0, 4.0, opt);
    CHECK(c2.flags.empty());
    CHECK(c2.sum_identity_error < 1e-12);
    CHECK(c2.sup_k1 > 0.0);
    CHECK(c2.fourier_k2 > 0.0);
    CHECK(c2.csv().find("fourier_k3") != std::string::npos);
    CHECK(c2.samples_csv().find("abs_k3") != std::string::npos);
    opt.r = 5.0;
    CHECK_THROWS_AS(kernel_decomposition(64, 4096.0, 4.0, opt), Error);
}

TEST_CASE("distributional measure") {
    auto lams = distributional_lambdas(4, 4.0, 6);
    auto win = lambda_window(4, 4.0);
    CHECK(lams.front() == doctest::Approx(win[0]));
    CHECK(lams.back() == doctest::Approx(win[1]));
    DistrOptions opt;
    opt.t_samples = 2;
    auto rep = distributional_check(4, lams, 4.0, 2, opt);
    CHECK(rep.monotone);
    CHECK(rep.rows.size() == 12);
    CHECK(rep.field_max > 0.0);
    for (const auto& r : rep.rows) {
        CHECK(r.measure >= 0.0);
        CHECK(r.band >= 0.0);
        if (r.lambda > rep.field_max) CHECK(r.measure == 0.0);
    }
    CHECK(rep.rows[0].measure > 0.0);
    CHECK_THROWS_AS(distributional_check(4, {win[1] * 4.0}, 4.0, 1, opt), Error);
    CHECK_THROWS_AS(distributional_check(6, {10.0}, 4.0, 1, opt), Error);
}
