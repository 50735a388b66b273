#include <doctest.h>

#include <cmath>

#include "spnls/ensemble.hpp"
#include "spnls/error.hpp"
#include "spnls/norms.hpp"
#include "spnls/spectral.hpp"
#include "support.hpp"

using namespace spnls;
using namespace testing_support;

namespace {

const GridSpec kSpec{2, 16, 8};

double ref_eta1(double y) {
    double a = std::fabs(y);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    double s = a - 1.0;
    double g1 = std::exp(-1.0 / (1.0 - s)), g0 = std::exp(-1.0 / s);
    return g1 / (g0 + g1);
}

Trajectory static_trajectory(const Field& f, double T, int n) {
    Trajectory u{f.spec(), {}, {}, T / n};
    for (int i = 0; i <= n; ++i) {
        u.times.push_back(T * i / n);
        u.fields.push_back(f);
    }
    return u;
}

Trajectory scaled_trajectory(const Trajectory& u, cplx c) {
    Trajectory v = u;
    for (auto& f : v.fields) f = scaled(f, c);
    return v;
}

}  // namespace

TEST_CASE("elementary norms") {
    cplx c(0.6, 0.8);
    Field f(kSpec, cvec(kSpec.size(), c));
    CHECK(norms::l2_norm(f) == doctest::Approx(std::sqrt(kSpec.volume())).epsilon(1e-13));
    CHECK(kSpec.volume() == doctest::Approx(kTwoPi * 2 * std::pow(kTwoPi, 3)));

    Field w = ensemble::plane_wave(kSpec, 0.5, {1, 2, 0, -1});
    double xi2 = 0.25 + 4 + 1;
    CHECK(norms::h1_norm(w) == doctest::Approx(std::sqrt(1 + xi2) * norms::l2_norm(w)).epsilon(1e-12));
    CHECK(norms::hdot1_norm(w) == doctest::Approx(std::sqrt(xi2) * norms::l2_norm(w)).epsilon(1e-12));

    Field r = random_field(kSpec, 1);
    for (double p : {1.0, 3.0, 4.0, 6.5}) {
        double s = 0.0;
        for (const cplx& z : r.values()) s += std::pow(std::abs(z), p);
        double ref = std::pow(s * kSpec.cell_volume(), 1.0 / p);
        CHECK(norms::lp_norm(r, p) == doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK(norms::lp_norm(r, INFINITY) == doctest::Approx(max_abs(r.values())).epsilon(1e-15));
    CHECK_THROWS_AS(norms::lp_norm(r, 0.5), Error);
}

TEST_CASE("homogeneity and triangle inequality") {
    for (unsigned seed = 0; seed < 5; ++seed) {
        Field f = random_field(kSpec, 10 + seed), g = random_field(kSpec, 20 + seed);
        Field fg = sub(f, scaled(g, -1.0));
        cplx c(-1.7, 0.4);
        for (double p : {1.0, 2.0, 3.0, 4.0, double(INFINITY)}) {
            CHECK(norms::lp_norm(scaled(f, c), p) == doctest::Approx(std::abs(c) * norms::lp_norm(f, p)).epsilon(1e-10));
            CHECK(norms::lp_norm(fg, p) <= norms::lp_norm(f, p) + norms::lp_norm(g, p) + 1e-10);
        }
        CHECK(norms::h1_norm(scaled(f, c)) == doctest::Approx(std::abs(c) * norms::h1_norm(f)).epsilon(1e-10));
        CHECK(norms::h1_norm(fg) <= norms::h1_norm(f) + norms::h1_norm(g) + 1e-10);
    }
}

TEST_CASE("mass and energy") {
    norms::MassEnergy z = norms::mass_energy(Field::zeros(kSpec));
    CHECK(z.mass == 0.0);
    CHECK(z.energy == 0.0);

    cplx c(0.3, -0.4);
    double vol = kSpec.volume();
    norms::MassEnergy k = norms::mass_energy(Field(kSpec, cvec(kSpec.size(), c)));
    CHECK(k.mass == doctest::Approx(std::norm(c) * vol).epsilon(1e-13));
    CHECK(k.energy == doctest::Approx(0.25 * std::pow(std::abs(c), 4) * vol).epsilon(1e-12));

    cplx A(0.0, 0.7);
    norms::MassEnergy w = norms::mass_energy(ensemble::plane_wave(kSpec, A, {3, 1, 0, 2}));
    double xi2 = 2.25 + 1 + 4;
    CHECK(w.energy ==
          doctest::Approx(0.5 * std::norm(A) * xi2 * vol + 0.25 * std::pow(std::abs(A), 4) * vol).epsilon(1e-12));
}

TEST_CASE("Z norm") {
    Field zero = Field::zeros(kSpec);
    CHECK(norms::z_norm(static_trajectory(zero, 1.0, 16)).value == 0.0);

    // Static wave at ξ0 = (0, 3, 0, 0): only the shells N = 2 and N = 4 see it.
    cplx A(0.9, 0.0);
    Field w = ensemble::plane_wave(kSpec, A, {0, 3, 0, 0});
    auto eta4 = [](double s) { return std::pow(ref_eta1(s), 2); };  // only one nonzero component
    double m4 = eta4(3.0 / 4) - eta4(3.0 / 2), m2 = eta4(3.0 / 2) - eta4(3.0);
    double vol = kSpec.volume();
    double dens = (16 * std::pow(m4, 4) + 4 * std::pow(m2, 4)) * std::pow(std::abs(A), 4) * vol;
    Trajectory u = static_trajectory(w, 1.0, 16);
    norms::NormReport rep = norms::z_norm(u);
    CHECK(rep.value == doctest::Approx(std::pow(dens, 0.25)).epsilon(1e-12));
    double sum4 = 0.0;
    for (auto& [N, v] : rep.breakdown) sum4 += std::pow(v, 4);
    CHECK(std::pow(sum4, 0.25) == doctest::Approx(rep.value).epsilon(1e-12));
    CHECK(rep.flags.empty());

    cplx c(0.0, -2.5);
    CHECK(norms::z_norm(scaled_trajectory(u, c)).value == doctest::Approx(2.5 * rep.value).epsilon(1e-12));

    // Z′ = Z^{3/4} · (sup H¹)^{1/4}
    double h1 = std::sqrt(1 + 9.0) * std::abs(A) * std::sqrt(vol);
    CHECK(norms::zprime_norm(u, u.span()) ==
          doctest::Approx(std::pow(dens, 0.1875) * std::pow(h1, 0.25)).epsilon(1e-12));
    CHECK(norms::zprime_norm(scaled_trajectory(u, c), u.span()) ==
          doctest::Approx(2.5 * norms::zprime_norm(u, u.span())).epsilon(1e-12));

    // On a window longer than 1 the sup over unit pieces equals the single-piece value.
    Trajectory longer = static_trajectory(w, 2.0, 32);
    CHECK(norms::z_norm(longer).value == doctest::Approx(rep.value).epsilon(1e-12));
    CHECK(!norms::z_norm(static_trajectory(w, 1.0, 4)).flags.empty());
}

TEST_CASE("Z norm is monotone under refinement of the interval") {
    Field f = ensemble::smooth_random(kSpec, 3, 2.0);
    Trajectory u{kSpec, {}, {}, 0.0};
    for (int i = 0; i <= 64; ++i) {
        double t = i / 32.0;
        u.times.push_back(t);
        u.fields.push_back(scaled(spectral::propagate(f, t), 1.0 + 0.5 * std::sin(3 * t)));
    }
    double whole = norms::z_norm(u, {0.0, 2.0}).value;
    double left = norms::z_norm(u, {0.0, 1.0}).value, right = norms::z_norm(u, {1.0, 2.0}).value;
    double quarter = norms::z_norm(u, {0.5, 1.0}).value;
    CHECK(whole >= std::max(left, right) - 1e-12);
    CHECK(left >= quarter - 1e-12);
}

TEST_CASE("Duhamel norm") {
    Field g = ensemble::smooth_random(kSpec, 5, 2.0, 1.3);
    Trajectory zero = static_trajectory(Field::zeros(kSpec), 1.0, 8);
    CHECK(norms::duhamel_norm(zero, zero.span()).value == 0.0);

    Trajectory h{kSpec, {}, {}, 0.0};
    for (int i = 0; i <= 20; ++i) {
        double t = 0.2 + 0.5 * i / 20.0;
        h.times.push_back(t);
        h.fields.push_back(spectral::propagate(g, t));
    }
    CHECK(norms::duhamel_norm(h, h.span()).value == doctest::Approx(0.5 * 1.3).epsilon(1e-12));

    // Richardson: time-dependent forcing against a fine-step reference.
    Field g2 = ensemble::smooth_random(kSpec, 6, 2.0);
    auto forcing = [&](int n) {
        Trajectory k{kSpec, {}, {}, 0.0};
        for (int i = 0; i <= n; ++i) {
            double t = double(i) / n;
            cvec v(kSpec.size());
            for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::cos(7 * t) * g[j] + std::sin(4 * t) * g2[j];
            k.times.push_back(t);
            k.fields.push_back(Field(kSpec, v));
        }
        return norms::duhamel_norm(k, k.span()).value;
    };
    double ref = forcing(1024), a = forcing(32), b = forcing(64);
    CHECK(std::fabs(b - ref) <= 0.01 * ref);
    CHECK(std::fabs(b - ref) < std::fabs(a - ref));
}

TEST_CASE("refined Sobolev ratio") {
    Field w = ensemble::plane_wave(kSpec, 1.0, {2, 1, 0, 0});
    double r = norms::refined_sobolev_check(w);
    // Both sides of a plane wave by hand: ξ0 = (1,1,0,0) sits in shells 1 and 2.
    double vol = kSpec.volume();
    double m1 = std::pow(ref_eta1(1) * ref_eta1(1), 2);
    double m2 = std::pow(ref_eta1(0.5) * ref_eta1(0.5), 2) - m1;
    double sup = std::max(m1, m2 / 2.0);
    double expect = std::pow(vol, 0.25) / std::sqrt(sup * std::sqrt(3.0) * std::sqrt(vol));
    CHECK(r == doctest::Approx(expect).epsilon(1e-12));
    CHECK(norms::refined_sobolev_check(scaled(w, cplx(0, 4))) == doctest::Approx(r).epsilon(1e-12));
    CHECK_THROWS_AS(norms::refined_sobolev_check(Field::zeros(kSpec)), Error);

    double worst = 0.0;
    for (unsigned s = 0; s < 100; ++s) {
        double v = norms::refined_sobolev_check(ensemble::smooth_random(kSpec, 100 + s, 3.0));
        CHECK(std::isfinite(v));
        worst = std::max(worst, v);
    }
    MESSAGE("max refined Sobolev ratio over 100 random fields: " << worst);
    CHECK(worst < 10.0);
}
