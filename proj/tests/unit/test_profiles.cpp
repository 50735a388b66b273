#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spnls/error.hpp"
#include "spnls/norms.hpp"
#include "spnls/profiles.hpp"
#include "spnls/solver.hpp"
#include "spnls/spectral.hpp"
#include "support.hpp"

using namespace spnls;
using namespace spnls::profiles;
using namespace testing_support;

namespace {

const GridSpec kSmall{1, 16, 16};
const GridSpec kTorus{1, 32, 32};

double ref_eta1(double y) {
    double a = std::fabs(y);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    double s = a - 1.0;
    double g1 = std::exp(-1.0 / (1.0 - s)), g0 = std::exp(-1.0 / s);
    return g1 / (g0 + g1);
}

EuclidField radial_bump(const EuclidSpec& box, double rad) {
    cvec v(box.size());
    std::size_t i = 0;
    for (int a = 0; a < box.n4; ++a)
        for (int b = 0; b < box.n4; ++b)
            for (int c = 0; c < box.n4; ++c)
                for (int d = 0; d < box.n4; ++d, ++i) {
                    double r = std::sqrt(box.coord(a) * box.coord(a) + box.coord(b) * box.coord(b) +
                                         box.coord(c) * box.coord(c) + box.coord(d) * box.coord(d));
                    v[i] = ref_eta1(r / rad);
                }
    return EuclidField(box, v);
}

Field gaussian(const GridSpec& spec, double amp, double sigma) {
    cvec v(spec.size());
    std::size_t i = 0;
    for (int a = 0; a < spec.n1; ++a)
        for (int b = 0; b < spec.nper; ++b)
            for (int c = 0; c < spec.nper; ++c)
                for (int d = 0; d < spec.nper; ++d, ++i) {
                    double r2 = std::pow(spec.coord(0, a), 2) + std::pow(spec.coord(1, b), 2) +
                                std::pow(spec.coord(2, c), 2) + std::pow(spec.coord(3, d), 2);
                    v[i] = amp * std::exp(-r2 / (2.0 * sigma * sigma));
                }
    return Field(spec, v);
}

Field plane_wave(const GridSpec& spec, const std::array<int, 4>& k) {
    cvec v(spec.size());
    std::size_t i = 0;
    for (int a = 0; a < spec.n1; ++a)
        for (int b = 0; b < spec.nper; ++b)
            for (int c = 0; c < spec.nper; ++c)
                for (int d = 0; d < spec.nper; ++d, ++i)
                    v[i] = std::polar(1.0, k[0] * spec.coord(0, a) / spec.L1 + k[1] * spec.coord(1, b) +
                                               k[2] * spec.coord(2, c) + k[3] * spec.coord(3, d));
    return Field(spec, v);
}

Field add(const Field& a, const Field& b) {
    cvec v = a.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += b[i];
    return Field(a.spec(), v);
}

EuclidField esub(const EuclidField& a, const EuclidField& b) {
    cvec d = a.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
    return EuclidField(a.spec(), d);
}

// Frequency support in |ξ| ≤ 1, normalized in H¹.
EuclidField band_one_bump(const EuclidSpec& box, double amp) {
    cvec c(box.size());
    std::size_t idx = 0;
    for (int a = 0; a < box.n4; ++a)
        for (int b = 0; b < box.n4; ++b)
            for (int d = 0; d < box.n4; ++d)
                for (int e = 0; e < box.n4; ++e, ++idx)
                    c[idx] = spectral::eta4({2 * box.freq(a), 2 * box.freq(b), 2 * box.freq(d), 2 * box.freq(e)});
    EuclidField f = inverse_fourier(EuclidSpectrum(box, c));
    double s = amp / norms::h1_norm(f);
    cvec v = f.values();
    for (auto& z : v) z *= s;
    return EuclidField(box, v);
}

FrameEntry euclid_frame(double N, Point x = {}) {
    FrameEntry f;
    f.kind = FrameKind::Euclidean;
    f.N = N;
    f.x = x;
    return f;
}

FrameEntry scale1_frame(Point x) {
    FrameEntry f;
    f.x = x;
    return f;
}

// Scale-1 Gaussian at the origin plus T_8φ at the antipodal corner, moving one cell per element.
const ProfileDecomposition& two_bubbles() {
    static const ProfileDecomposition d = [] {
        Field S = gaussian(kTorus, 0.5, 0.5);
        Field E = rescale_TN(radial_bump(EuclidSpec{6.0, 32}, 1.2), 8, kTorus);
        std::vector<Field> seq;
        for (int k = 0; k < 2; ++k) {
            Point xe{-std::numbers::pi, -std::numbers::pi, -std::numbers::pi, -std::numbers::pi + k * kTorus.dxp()};
            seq.push_back(add(S, translate(E, xe)));
        }
        ProfileOptions opt;
        opt.box = EuclidSpec{8.0, 32};
        return profile_decompose(seq, opt);
    }();
    return d;
}

}  // namespace

TEST_CASE("translation and Schroedinger modulation") {
    Field f = random_field(kSmall, 3);
    Point x0{3 * kSmall.dx1(), -2 * kSmall.dxp(), 5 * kSmall.dxp(), 0.0};
    CHECK(max_abs_diff(modulate_translate(f, 0.0, Point{}).values(), f.values()) == 0.0);
    Field g = modulate_translate(f, 0.37, x0);
    Point back{-x0[0], -x0[1], -x0[2], -x0[3]};
    Field h = translate(spectral::propagate(g, 0.37), back);
    CHECK(max_abs_diff(h.values(), f.values()) < 1e-12 * max_abs(f.values()));
    CHECK(norms::l2_norm(g) == doctest::Approx(norms::l2_norm(f)).epsilon(1e-12));
    CHECK(norms::h1_norm(g) == doctest::Approx(norms::h1_norm(f)).epsilon(1e-12));
    CHECK(norms::h1_norm(translate(f, x0)) == doctest::Approx(norms::h1_norm(f)).epsilon(1e-12));
    CHECK_THROWS_AS(translate(f, Point{0.1, 0.0, 0.0, 0.0}), Error);
}

TEST_CASE("critical rescaling") {
    EuclidSpec box{8.0, 32};
    EuclidField zero(box, cvec(box.size()));
    CHECK(max_abs(rescale_TN(zero, 4, kTorus).values()) == 0.0);

    EuclidField a = radial_bump(box, 1.0);
    EuclidField b(box, random_values(box.size(), 9));
    cplx ca(0.5, -1.0), cb(2.0, 0.25);
    cvec mix(box.size());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = ca * a[i] + cb * b[i];
    Field lhs = rescale_TN(EuclidField(box, mix), 2, kTorus);
    Field ta = rescale_TN(a, 2, kTorus), tb = rescale_TN(b, 2, kTorus);
    cvec rhs(lhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = ca * ta[i] + cb * tb[i];
    CHECK(max_abs_diff(lhs.values(), rhs) < 1e-11 * max_abs(rhs));

    std::vector<double> lx, ly;
    for (double N : {2.0, 4.0, 8.0}) {
        lx.push_back(std::log(N));
        ly.push_back(std::log(norms::l2_norm(rescale_TN(a, N, kTorus))));
    }
    double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3, sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    double slope = sxy / sxx;
    MESSAGE("L2 decay slope " << slope);
    CHECK(slope > -1.25);
    CHECK(slope < -0.75);
}

TEST_CASE("orthogonality score") {
    FrameEntry e = euclid_frame(4.0, Point{0.0, 1.0, 0.0, 0.0});
    CHECK(orthogonality_score(e, e, kTorus) == 0.0);
    FrameEntry f = e;
    f.x[2] = 0.5;
    CHECK(orthogonality_score(e, f, kTorus) == doctest::Approx(4.0 * 0.5));
    f = e;
    f.x[1] = 1.0 + kTwoPi - 0.25;
    CHECK(orthogonality_score(e, f, kTorus) == doctest::Approx(4.0 * 0.25));
    f = e;
    f.x[0] = 0.3;
    CHECK(orthogonality_score(e, f, kTorus) == doctest::Approx(4.0 * 2.0 * std::sin(0.15)));
    f = e;
    f.N = 16.0;
    f.t = 0.01;
    CHECK(orthogonality_score(e, f, kTorus) == doctest::Approx(std::log(4.0) + 16.0 * 0.01));

    for (int kind = 0; kind < 3; ++kind) {
        double first12 = 0, first21 = 0, last12 = 0, last21 = 0;
        for (int k = 0; k <= 12; ++k) {
            double N = std::ldexp(1.0, k);
            FrameEntry a = euclid_frame(kind == 0 ? N : N), b = euclid_frame(kind == 0 ? 1.0 : N);
            if (kind == 1) b.t = 1.0 / N;
            if (kind == 2) b.x[1] = std::pow(N, -0.5);
            double s12 = orthogonality_score(a, b, kTorus), s21 = orthogonality_score(b, a, kTorus);
            if (k == 0) {
                first12 = s12;
                first21 = s21;
            }
            last12 = s12;
            last21 = s21;
        }
        CHECK(first12 < 10.0);
        CHECK(first21 < 10.0);
        CHECK(last12 > 8.0);
        CHECK(last21 > 8.0);
    }
}

TEST_CASE("Lambda functional") {
    Field zero = Field::zeros(kSmall);
    CHECK(lambda_functional(zero).value == 0.0);

    // A plane wave: N^{-1}|P_N e^{ik·x}| is the constant multiplier value over N.
    Field w = plane_wave(kSmall, {0, 3, 0, 0});
    auto r = lambda_functional(w);
    double want = 0.0;
    int wantN = 0;
    for (int N = 1; N <= 8; N *= 2) {
        double m = std::pow(ref_eta1(3.0 / N), 2) - std::pow(ref_eta1(6.0 / N), 2);
        if (m / N > want) {
            want = m / N;
            wantN = N;
        }
    }
    CHECK(r.value == doctest::Approx(want).epsilon(1e-12));
    CHECK(r.N == wantN);

    Field g = gaussian(kSmall, 0.5, 0.5);
    auto base = lambda_functional(g);
    cplx c(2.5, -1.5);
    auto scaled_r = lambda_functional(scaled(g, c));
    CHECK(scaled_r.value == doctest::Approx(std::abs(c) * base.value).epsilon(1e-12));
    CHECK(base.N <= 2);
    Point x0{4 * kSmall.dx1(), 2 * kSmall.dxp(), 0.0, -3 * kSmall.dxp()};
    auto moved = lambda_functional(translate(g, x0));
    CHECK(moved.value == doctest::Approx(base.value).epsilon(1e-12));
    CHECK(torus_distance(kSmall, moved.x, Point{base.x[0] + x0[0], base.x[1] + x0[1], base.x[2] + x0[2],
                                                 base.x[3] + x0[3]}) < 1e-9);
    CHECK_THROWS_AS(lambda_functional(g, {2.0}, {1}), Error);
    CHECK_THROWS_AS(lambda_functional(g, {0.0}, {3}), Error);

    auto coarse = lambda_functional(g, lambda_times(8), lambda_scales(kSmall), 0);
    auto fine = lambda_functional(g, lambda_times(8), lambda_scales(kSmall), 24);
    CHECK(fine.value >= coarse.value);
}

TEST_CASE("Lambda is scale invariant on rescaled bubbles") {
    EuclidField phi = radial_bump(EuclidSpec{6.0, 32}, 1.2);
    std::vector<double> vals;
    for (int N : {2, 4, 8}) {
        auto r = lambda_functional(rescale_TN(phi, N, kTorus));
        MESSAGE("N=" << N << " Lambda " << r.value << " N* " << r.N);
        vals.push_back(r.value);
        CHECK(r.N >= N / 2);
        CHECK(r.N <= 2 * N);
    }
    double lo = *std::min_element(vals.begin(), vals.end()), hi = *std::max_element(vals.begin(), vals.end());
    CHECK(hi < 2.0 * lo);
}

TEST_CASE("profile extraction") {
    Field psi = gaussian(kSmall, 0.5, 0.5);
    Point x0{2 * kSmall.dx1(), 0.0, -4 * kSmall.dxp(), kSmall.dxp()};
    std::vector<Field> seq(3, translate(psi, x0));
    ProfileOptions opt;
    auto ep = extract_profile(seq, std::vector<FrameEntry>(3, scale1_frame(x0)), opt);
    REQUIRE(!ep.refused);
    CHECK(max_abs_diff(ep.scale1.values(), psi.values()) < 1e-10);
    CHECK(ep.cauchy < 1e-12);
    CHECK(ep.norm == doctest::Approx(norms::h1_norm(psi)));

    std::vector<Field> zeros(2, Field::zeros(kSmall));
    auto refused = extract_profile(zeros, std::vector<FrameEntry>(2, scale1_frame(Point{})), opt);
    CHECK(refused.refused);
    CHECK(refused.mapped.empty());

    CHECK_THROWS_AS(extract_profile(seq, std::vector<FrameEntry>(2, scale1_frame(x0)), opt), Error);
    FrameEntry bad = scale1_frame(x0);
    bad.N = 2.0;
    CHECK_THROWS_AS(extract_profile(seq, std::vector<FrameEntry>(3, bad), opt), Error);
}

TEST_CASE("Euclidean extraction") {
    // Resolved scale: the pullback recovers φ itself along moving centers.
    EuclidSpec box{4.0, 32};
    EuclidField phi = radial_bump(box, 0.5);
    std::vector<Field> seq;
    std::vector<FrameEntry> frames;
    for (int k = 0; k < 3; ++k) {
        Point x{k * kTorus.dx1(), -k * kTorus.dxp(), 0.0, 2 * k * kTorus.dxp()};
        seq.push_back(translate(rescale_TN(phi, 1, kTorus), x));
        frames.push_back(euclid_frame(1.0, x));
    }
    ProfileOptions opt;
    opt.box = box;
    opt.R = 2.0;
    opt.refine_R = false;
    opt.t_samples = 5;
    auto ep = extract_profile(seq, frames, opt);
    REQUIRE(!ep.refused);
    cvec d = ep.euclid.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= phi[i];
    double rel = norms::hdot1_norm(EuclidField(box, d)) / norms::hdot1_norm(phi);
    MESSAGE("N=1 recovery error " << rel);
    CHECK(rel < 0.05);

    // N = 8: pulling back and pushing forward reproduces the data.
    EuclidField big = radial_bump(EuclidSpec{6.0, 32}, 1.2);
    Field f8 = rescale_TN(big, 8, kTorus);
    ProfileOptions o8;
    o8.box = EuclidSpec{8.0, 32};
    o8.t_samples = 5;
    auto e8 = extract_profile({f8}, {euclid_frame(8.0)}, o8);
    REQUIRE(!e8.refused);
    double err = norms::hdot1_norm(sub(e8.mapped[0], f8)) / norms::hdot1_norm(f8);
    MESSAGE("N=8 round trip error " << err);
    CHECK(err < 0.05);
    CHECK(e8.R >= 4.0);
}

TEST_CASE("profile decomposition of Scale-1 data") {
    ProfileOptions opt;
    std::vector<Field> zeros(2, Field::zeros(kSmall));
    auto z = profile_decompose(zeros, opt);
    CHECK(z.profiles.empty());
    CHECK(z.lambda_remainder == 0.0);
    for (const auto& r : z.remainder) CHECK(max_abs(r.values()) == 0.0);

    Field psi = gaussian(kSmall, 0.5, 0.5);
    std::vector<Field> seq(2, psi);
    auto d = profile_decompose(seq, opt);
    REQUIRE(d.profiles.size() == 1);
    CHECK(d.profiles[0].kind == FrameKind::Scale1);
    CHECK(d.lambda_remainder <= opt.delta);
    CHECK(d.orthogonality.max_l2 <= 1e-6);
    CHECK(d.orthogonality.max_hdot1 <= 1e-6);
    for (std::size_t k = 0; k < seq.size(); ++k)
        CHECK(max_abs_diff(add(d.profiles[0].mapped[k], d.remainder[k]).values(), seq[k].values()) < 1e-12);

    Point x0{5 * kSmall.dx1(), 3 * kSmall.dxp(), -kSmall.dxp(), 7 * kSmall.dxp()};
    std::vector<Field> moved(2, translate(psi, x0));
    auto m = profile_decompose(moved, opt);
    REQUIRE(m.profiles.size() == 1);
    CHECK(max_abs_diff(m.profiles[0].scale1.values(), d.profiles[0].scale1.values()) < 1e-10);
    for (std::size_t k = 0; k < 2; ++k) {
        Point want{};
        for (int a = 0; a < 4; ++a) want[a] = d.profiles[0].frames[k].x[a] + x0[a];
        CHECK(torus_distance(kSmall, m.profiles[0].frames[k].x, want) < 1e-9);
    }

    ProfileOptions cap = opt;
    cap.max_profiles = 1;
    cap.delta = 1e-9;
    auto capped = profile_decompose({add(psi, plane_wave(kSmall, {0, 5, 0, 0})), psi}, cap);
    CHECK(capped.profiles.size() <= 1);
}

TEST_CASE("two-bubble decomposition and orthogonality") {
    const auto& d = two_bubbles();
    REQUIRE(d.profiles.size() == 2);
    CHECK(d.profiles[0].kind == FrameKind::Euclidean);
    CHECK(d.profiles[1].kind == FrameKind::Scale1);
    CHECK(d.profiles[0].frames[0].N == 8.0);
    CHECK(d.profiles[0].frames[1].x[3] == doctest::Approx(-std::numbers::pi + kTorus.dxp()));
    CHECK(d.lambda_remainder <= d.delta);
    CHECK(d.orthogonality.inner[0][1] <= 1e-3);
    CHECK(d.orthogonality.max_l2 <= 0.05);
    CHECK(d.orthogonality.max_hdot1 <= 0.05);
    CHECK(d.orthogonality.max_l4 <= 0.05);
    CHECK(d.orthogonality.score[0][1] > 10.0);
    CHECK(d.count_constant == doctest::Approx(2 * d.delta * d.delta));
    for (std::size_t k = 0; k < d.fields.size(); ++k) {
        Field sum = add(add(d.profiles[0].mapped[k], d.profiles[1].mapped[k]), d.remainder[k]);
        CHECK(max_abs_diff(sum.values(), d.fields[k].values()) < 1e-12 * max_abs(d.fields[k].values()));
    }
    CHECK(d.csv().find("euclidean") != std::string::npos);

    ProfileDecomposition only;
    only.fields = d.fields;
    only.remainder = d.fields;
    auto r = orthogonality_report(only);
    CHECK(r.max_l2 == 0.0);
    CHECK(r.max_hdot1 == 0.0);
    CHECK(r.max_l4 == 0.0);
}

TEST_CASE("smoothed profile") {
    EuclidSpec box{8.0, 32};
    EuclidField phi = radial_bump(box, 1.5);
    int K = 0;
    double achieved = 0.0;
    EuclidField s = smooth_profile(phi, 1e-2 * norms::hdot1_norm(phi), &K, &achieved);
    CHECK(achieved <= 1e-2 * norms::hdot1_norm(phi));
    CHECK(norms::hdot1_norm(esub(s, phi)) == doctest::Approx(achieved).epsilon(1e-9));
    int K2 = 0;
    smooth_profile(phi, 1e-1 * norms::hdot1_norm(phi), &K2);
    CHECK(K2 <= K);
    EuclidField same = smooth_profile(phi, 0.0, &K);
    CHECK(K == 0);
    CHECK(max_abs_diff(same.values(), phi.values()) == 0.0);
}

TEST_CASE("nonlinear profile experiment") {
    solver::EuclidOptions eo;
    solver::SolveConfig cfg;
    EuclidField zero(eo.box, cvec(eo.box.size()));
    cfg.dt = 0.02 / 16;
    auto z = nonlinear_profile_experiment(zero, {euclid_frame(4.0)}, 0.0, 4.0, 1.0, cfg, eo);
    CHECK(z.rows.at(0).sup_discrepancy == 0.0);

    EuclidField phi = band_one_bump(eo.box, 0.5);
    std::vector<double> sup;
    for (double N : {4.0, 8.0}) {
        solver::SolveConfig c = cfg;
        c.dt = 0.02 / (N * N);
        Point x{2 * eo.torus.dx1(), 0.0, eo.torus.dxp(), 0.0};
        auto rep = nonlinear_profile_experiment(phi, {euclid_frame(N, x)}, 0.0, 4.0, 1.0, c, eo);
        MESSAGE("N=" << N << " sup discrepancy " << rep.rows[0].sup_discrepancy);
        sup.push_back(rep.rows[0].sup_discrepancy);
        if (N == 4.0) {
            auto direct = solver::euclidean_comparison(phi, N, 4.0, 1.0, c, eo);
            REQUIRE(direct.discrepancy.size() == rep.rows[0].discrepancy.size());
            for (std::size_t j = 0; j < direct.discrepancy.size(); ++j)
                CHECK(std::fabs(direct.discrepancy[j] - rep.rows[0].discrepancy[j]) <= 1e-10);
        }
    }
    CHECK(sup[1] < sup[0]);

    FrameEntry shifted = euclid_frame(4.0);
    shifted.t = 0.5 / 16.0;
    solver::SolveConfig c4 = cfg;
    c4.dt = 0.02 / 16.0;
    auto moving = nonlinear_profile_experiment(phi, {shifted}, 0.0, 4.0, 1.0, c4, eo);
    MESSAGE("t != 0 sup discrepancy " << moving.rows[0].sup_discrepancy);
    CHECK(std::isfinite(moving.rows[0].sup_discrepancy));
    CHECK(moving.rows[0].sup_discrepancy < 2.0 * sup[0] + 1e-3);
    CHECK_THROWS_AS(nonlinear_profile_experiment(phi, {euclid_frame(4.0, Point{0.05, 0, 0, 0})}, 0.0, 4.0, 1.0, cfg, eo),
                    Error);
}
