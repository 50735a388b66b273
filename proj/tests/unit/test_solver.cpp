#include <doctest.h>

#include <cmath>

#include "spnls/ensemble.hpp"
#include "spnls/error.hpp"
#include "spnls/rescale.hpp"
#include "spnls/solver.hpp"
#include "spnls/spectral.hpp"
#include "support.hpp"

using namespace spnls;
using namespace testing_support;

namespace {

const GridSpec kSpec{1, 16, 16};

solver::SolveConfig config(double dt, double rho = 1.0) {
    solver::SolveConfig c;
    c.dt = dt;
    c.rho = rho;
    return c;
}

double sup_l2_diff(const Trajectory& a, const Trajectory& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, norms::l2_norm(sub(a.fields[i], b.fields[i])));
    return m;
}

// φ = F^{-1}(c·η⁴(2ξ)) on the ℝ⁴ box.
EuclidField band_one_bump(const EuclidSpec& box, double amp) {
    cvec c(std::size_t(box.n4) * box.n4 * box.n4 * box.n4);
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

}  // namespace

TEST_CASE("plane wave is reproduced exactly") {
    std::array<int, 4> k{2, 1, -1, 0};
    cplx A(0.3, 0.4);
    Field u0 = ensemble::plane_wave(kSpec, A, k);
    Trajectory u = solver::evolve(u0, 1.0, config(1e-2));
    double w = 4 + 1 + 1 + std::norm(A);
    Field exact = scaled(u0, std::polar(1.0, -w));
    CHECK(u.times.back() == 1.0);
    CHECK(rel_l2(u.fields.back(), exact) <= 1e-10);
    solver::ConservationTable tab = solver::check_conservation(u);
    CHECK(tab.mass_drift <= 1e-11);
    CHECK(tab.energy_drift <= 1e-11);
}

TEST_CASE("zero data stays zero") {
    Trajectory u = solver::evolve(Field::zeros(kSpec), 0.1, config(1e-2));
    for (const auto& f : u.fields) CHECK(max_abs(f.values()) == 0.0);
    solver::PicardResult p = solver::picard_solve(Field::zeros(kSpec), {0.0, 0.1}, config(1e-2));
    CHECK(p.iterations == 1);
    for (const auto& f : p.trajectory.fields) CHECK(max_abs(f.values()) == 0.0);
}

TEST_CASE("Strang splitting is second order and conserves mass") {
    Field u0 = ensemble::smooth_random(kSpec, 7, 1.5, 30.0);
    auto end = [&](double dt) { return solver::evolve(u0, 0.5, config(dt)).fields.back(); };
    Field a = end(0.02), b = end(0.01), c = end(0.005);
    double r = norms::l2_norm(sub(a, b)) / norms::l2_norm(sub(b, c));
    CHECK(r == doctest::Approx(4.0).epsilon(0.2));

    Trajectory u = solver::evolve(u0, 0.5, config(0.01));
    CHECK(solver::check_conservation(u).mass_drift <= 1e-11);
}

TEST_CASE("energy drift") {
    Field small = ensemble::smooth_random(kSpec, 8, 1.5, 1.0);
    solver::SolveConfig c = config(1e-3);
    c.record_stride = 50;
    CHECK(solver::check_conservation(solver::evolve(small, 1.0, c)).energy_drift <= 1e-5);

    Field big = ensemble::smooth_random(kSpec, 9, 1.5, 40.0);
    auto drift = [&](double dt) {
        solver::SolveConfig cc = config(dt);
        return solver::check_conservation(solver::evolve(big, 0.5, cc)).energy_drift;
    };
    double d1 = drift(0.01), d2 = drift(0.005);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("resolution guard and configuration errors") {
    Field rough = ensemble::plane_wave(kSpec, 0.1, {0, 6, 0, 0});  // above Nyquist/2 = 4
    try {
        solver::evolve(rough, 0.1, config(1e-2));
        FAIL("expected resolution error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Resolution);
    }
    CHECK_THROWS_AS(solver::evolve(Field::zeros(kSpec), 0.1, config(-1.0)), Error);
    solver::SolveConfig c;
    c.max_iter = 0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("evolve_at runs forward and backward") {
    Field u0 = ensemble::smooth_random(kSpec, 10, 1.0, 2.0);
    std::vector<Field> out = solver::evolve_at(u0, 0.0, {-0.2, 0.0, 0.3}, config(1e-2));
    CHECK(max_abs_diff(out[1].values(), u0.values()) == 0.0);
    std::vector<Field> back = solver::evolve_at(out[2], 0.3, {0.0}, config(1e-2));
    // Strang splitting is time-reversible.
    CHECK(rel_l2(back[0], u0) <= 1e-12);
    Trajectory fwd = solver::evolve(u0, 0.3, config(1e-2));
    CHECK(rel_l2(out[2], fwd.fields.back()) <= 1e-12);
}

TEST_CASE("Picard iteration") {
    Field u0 = ensemble::smooth_random(kSpec, 11, 1.5, 0.01);
    solver::PicardResult p = solver::picard_solve(u0, {0.0, 0.1}, config(5e-3));
    CHECK(p.iterations >= 1);
    CHECK(p.duhamel_residual < 10 * 1e-10);
    for (double r : p.ratios) CHECK(r < 1.0);

    // Distance from the linear flow is cubic in the data.
    Trajectory lin = p.trajectory;
    for (std::size_t i = 0; i < lin.size(); ++i) lin.fields[i] = spectral::propagate(u0, lin.times[i]);
    double dev = 0.0;
    for (std::size_t i = 0; i < lin.size(); ++i) dev = std::max(dev, norms::h1_norm(sub(p.trajectory.fields[i], lin.fields[i])));
    CHECK(dev <= 1.0 * std::pow(0.01, 3));
    CHECK(dev > 0.0);

    // Cross-scheme agreement.
    Field mid = ensemble::smooth_random(kSpec, 12, 1.5, 3.0);
    solver::PicardResult q = solver::picard_solve(mid, {0.0, 0.2}, config(1e-3));
    Trajectory s = solver::evolve(mid, 0.2, config(1e-3));
    CHECK(sup_l2_diff(q.trajectory, s) <= 1e-6);
    CHECK(solver::duhamel_residual(q.trajectory, mid, 1.0) <= 10 * 1e-10);

    Field large = ensemble::smooth_random(kSpec, 13, 1.5, 2000.0);
    try {
        solver::picard_solve(large, {0.0, 1.0}, config(1e-2));
        FAIL("expected non-contraction");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonContraction);
        CHECK(std::string(e.what()).find("smallness condition violated") != std::string::npos);
    }
}

TEST_CASE("equation residual and stability") {
    Field u0 = ensemble::smooth_random(kSpec, 14, 1.5, 5.0);
    solver::SolveConfig c = config(2e-3);
    Trajectory base = solver::evolve(u0, 0.2, c);
    Trajectory e = solver::equation_residual(base, 1.0);

    solver::StabilityReport same = solver::stability_experiment(base, e, u0, c);
    CHECK(same.deviation <= 1e-12 * norms::h1_norm(u0));
    CHECK(same.data_term == 0.0);

    Trajectory zero_e = e;
    for (auto& f : zero_e.fields) f = Field::zeros(kSpec);
    Field dir = ensemble::smooth_random(kSpec, 15, 1.5, 1.0);
    std::vector<double> dev;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        solver::StabilityReport r = solver::stability_experiment(base, zero_e, sub(u0, scaled(dir, -eps)), c);
        CHECK(r.eps_in == doctest::Approx(eps).epsilon(1e-10));
        CHECK(std::isfinite(r.amplification));
        dev.push_back(r.deviation);
    }
    CHECK(dev[0] / dev[1] == doctest::Approx(10.0).epsilon(0.05));
    CHECK(dev[1] / dev[2] == doctest::Approx(10.0).epsilon(0.05));

    // ρ = 0: the deviation is the free propagation of the data difference.
    solver::SolveConfig lin = config(2e-3, 0.0);
    Trajectory lbase = solver::evolve(u0, 0.2, lin);
    solver::StabilityReport r = solver::stability_experiment(lbase, zero_e, sub(u0, scaled(dir, -1e-3)), lin);
    CHECK(r.deviation == doctest::Approx(1e-3 * norms::h1_norm(dir)).epsilon(1e-9));
}

TEST_CASE("blow-up monitor") {
    Field u0 = ensemble::smooth_random(kSpec, 16, 1.5, 2.0);
    solver::SolveConfig c = config(1e-2);
    Trajectory u = solver::evolve(u0, 0.8, c);
    solver::BlowupSeries b = solver::blowup_monitor(u, 4);
    CHECK(b.pieces.size() == 4);
    CHECK(!b.growth_flag);
    for (double z : b.z) CHECK(z > 0.0);
}

TEST_CASE("Euclidean comparison") {
    solver::EuclidOptions opt;
    EuclidField zero(opt.box, cvec(std::size_t(32) * 32 * 32 * 32));
    solver::EuclidComparison z = solver::euclidean_comparison(zero, 4, 4, 1.0, config(1e-3), opt);
    CHECK(z.sup_discrepancy == 0.0);

    EuclidField phi = band_one_bump(opt.box, 0.5);
    std::vector<double> sup;
    for (double N : {2.0, 4.0, 8.0}) {
        solver::SolveConfig c = config(0.02 / (N * N));
        solver::EuclidComparison rep = solver::euclidean_comparison(phi, N, 4, 1.0, c, opt);
        MESSAGE("N=" << N << " discrepancy " << rep.sup_discrepancy << " torus tail " << rep.torus_tail);
        CHECK(!rep.support_condition);
        sup.push_back(rep.sup_discrepancy);
    }
    CHECK_THROWS_AS(solver::euclidean_comparison(phi, 16, 4, 1.0, config(1e-4), opt), Error);
    CHECK(sup[1] < sup[0]);
    CHECK(sup[2] < sup[1]);

    // Linear case: the box side is the free ℝ⁴ flow, windowed and rescaled.
    const double N = 4.0;
    solver::SolveConfig c = config(0.02 / (N * N), 0.0);
    solver::EuclidComparison rep = solver::euclidean_comparison(phi, N, 4, 1.0, c, opt);
    Field fN = profiles::rescale_TN(phi, N, opt.torus);
    double worst = 0.0;
    for (std::size_t j = 0; j < rep.times.size(); ++j) {
        double t = rep.times[j];
        EuclidSpectrum s = forward_fourier(phi);
        rvec k2 = laplace_symbol(opt.box);
        for (std::size_t i = 0; i < k2.size(); ++i) s.coeffs()[i] *= std::polar(1.0, -t * N * N * k2[i]);
        Field V = profiles::transfer_to_torus(inverse_fourier(s), N, 4, opt.torus, true);
        Field U = spectral::propagate(fN, t);
        worst = std::max(worst, std::fabs(norms::h1_norm(sub(U, V)) - rep.discrepancy[j]));
    }
    CHECK(worst <= 1e-9 * (1 + rep.sup_discrepancy));
}
