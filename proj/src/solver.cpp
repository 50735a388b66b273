#include "spnls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "spnls/error.hpp"
#include "spnls/fft.hpp"
#include "spnls/kernels.hpp"
#include "spnls/rescale.hpp"
#include "spnls/spectral.hpp"

namespace spnls::solver {
namespace {

const simd::KernelTable& K() { return simd::active(); }

template <class SpecT>
class Stepper {
public:
    Stepper(const SpecT& spec, double rho) : dims_(spec.dims()), k2_(laplace_symbol(spec)), rho_(rho) {}

    // h may be negative; steps ≥ 1 full Strang steps N(h/2) L(h) N(h/2) with inner halves fused.
    void advance(cvec& u, double h, long steps, double t_start) {
        if (steps <= 0) return;
        nonlinear(u, 0.5 * h);
        for (long s = 0; s < steps; ++s) {
            linear(u, h);
            nonlinear(u, s + 1 == steps ? 0.5 * h : h);
            if ((s & 63) == 63 || s + 1 == steps) check_finite(u, t_start + (s + 1) * h);
        }
    }

private:
    void linear(cvec& u, double tau) {
        if (tau != tau_) {
            double inv_n = 1.0 / static_cast<double>(u.size());
            phase_.resize(k2_.size());
            for (std::size_t i = 0; i < k2_.size(); ++i) {
                double arg = std::fmod(tau * k2_[i], kTwoPi);
                phase_[i] = cplx(std::cos(arg) * inv_n, -std::sin(arg) * inv_n);
            }
            tau_ = tau;
        }
        fft::transform(u.data(), dims_, fft::Direction::Forward);
        K().mul_complex(u.data(), phase_.data(), u.size());
        fft::transform(u.data(), dims_, fft::Direction::Backward);
    }

    void nonlinear(cvec& u, double tau) {
        if (rho_ != 0.0) K().phase_rotate(u.data(), rho_ * tau, u.size());
    }

    static void check_finite(const cvec& u, double t) {
        double s = K().sum_abs2(u.data(), u.size());
        if (!std::isfinite(s)) {
            std::ostringstream os;
            os << "non-finite solution at t=" << t;
            fail(ErrorKind::NumericalAbort, os.str());
        }
    }

    std::array<int, 4> dims_;
    rvec k2_;
    double rho_;
    double tau_ = std::numeric_limits<double>::quiet_NaN();
    cvec phase_;
};

template <class FieldT>
double tail_fraction(const rvec& w, const std::vector<char>& hi, const cvec& c) {
    double total = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double e = w[i] * std::norm(c[i]);
        total += e;
        if (hi[i]) tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

template <class SpecT, class FieldT>
std::vector<FieldT> evolve_at_impl(const FieldT& u0, double t0, const std::vector<double>& times,
                                   const SolveConfig& cfg) {
    cfg.validate();
    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });
    std::vector<FieldT> out(times.size());
    Stepper<SpecT> st(u0.spec(), cfg.rho);

    auto run = [&](auto begin, auto end) {
        cvec u = u0.values();
        double t = t0;
        for (auto it = begin; it != end; ++it) {
            double target = times[*it];
            double span = target - t;
            long steps = static_cast<long>(std::ceil(std::fabs(span) / cfg.dt - 1e-9));
            if (steps > 0) st.advance(u, span / steps, steps, t);
            t = target;
            out[*it] = FieldT(u0.spec(), u);
        }
    };
    auto split = std::lower_bound(order.begin(), order.end(), t0, [&](std::size_t i, double v) { return times[i] < v; });
    run(split, order.end());
    run(std::make_reverse_iterator(split), order.rend());
    return out;
}

}  // namespace

void SolveConfig::validate() const {
    require(dt > 0.0 && std::isfinite(dt), ErrorKind::Config, "dt must be positive");
    require(tol > 0.0, ErrorKind::Config, "tol must be positive");
    require(max_iter >= 1, ErrorKind::Config, "max_iter must be >= 1");
    require(record_stride >= 1, ErrorKind::Config, "record_stride must be >= 1");
    require(rho >= -1.0 && rho <= 1.0, ErrorKind::Config, "rho must lie in [-1, 1]");
    require(resolution_tol > 0.0, ErrorKind::Config, "resolution_tol must be positive");
}

double resolution_tail(const Field& f) {
    const GridSpec& spec = f.spec();
    Spectrum s = forward_fourier(f);
    rvec w = laplace_symbol(spec);
    for (double& v : w) v += 1.0;
    auto inside = [](double nyq) { return [nyq](double x) { return std::fabs(x) > 0.5 * nyq ? 0.0 : 1.0; }; };
    rvec lo = spectral::separable(spec, {inside(spec.nyquist1()), inside(spec.nyquistp()), inside(spec.nyquistp()),
                                         inside(spec.nyquistp())});
    std::vector<char> mask(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) mask[i] = lo[i] == 0.0;
    return tail_fraction<Field>(w, mask, s.coeffs());
}

double resolution_tail(const EuclidField& f) {
    const EuclidSpec& spec = f.spec();
    EuclidSpectrum s = forward_fourier(f);
    rvec w = laplace_symbol(spec);
    for (double& v : w) v += 1.0;
    std::vector<char> mask(spec.size());
    int n = spec.n4;
    std::size_t k = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d, ++k) {
                    int m = std::max({std::abs(signed_index(a, n)), std::abs(signed_index(b, n)),
                                      std::abs(signed_index(c, n)), std::abs(signed_index(d, n))});
                    mask[k] = m > n / 4;
                }
    return tail_fraction<EuclidField>(w, mask, s.coeffs());
}

void check_resolution(const Field& f, double tol) {
    double tail = resolution_tail(f);
    if (tail > tol) {
        std::ostringstream os;
        os << "H1 energy fraction above Nyquist/2 is " << tail << " (tolerance " << tol << ")";
        fail(ErrorKind::Resolution, os.str());
    }
}

std::vector<Field> evolve_at(const Field& u0, double t0, const std::vector<double>& times, const SolveConfig& cfg) {
    check_resolution(u0, cfg.resolution_tol);
    return evolve_at_impl<GridSpec, Field>(u0, t0, times, cfg);
}

std::vector<EuclidField> evolve_at(const EuclidField& v0, double t0, const std::vector<double>& times,
                                   const SolveConfig& cfg) {
    double tail = resolution_tail(v0);
    if (tail > cfg.resolution_tol) {
        std::ostringstream os;
        os << "box H1 energy fraction above Nyquist/2 is " << tail << " (tolerance " << cfg.resolution_tol << ")";
        fail(ErrorKind::Resolution, os.str());
    }
    return evolve_at_impl<EuclidSpec, EuclidField>(v0, t0, times, cfg);
}

Trajectory evolve(const Field& u0, double T, const SolveConfig& cfg) {
    cfg.validate();
    require(T > 0.0 && std::isfinite(T), ErrorKind::OutOfRange, "evolve needs T > 0");
    if (cfg.scheme == Scheme::Picard) return picard_solve(u0, {0.0, T}, cfg).trajectory;
    check_resolution(u0, cfg.resolution_tol);

    long nsteps = std::max(1L, static_cast<long>(std::ceil(T / cfg.dt - 1e-9)));
    double h = T / nsteps;
    Trajectory traj;
    traj.spec = u0.spec();
    traj.dt = h;
    traj.times.push_back(0.0);
    traj.fields.push_back(u0);
    Stepper<GridSpec> st(u0.spec(), cfg.rho);
    cvec u = u0.values();
    long done = 0;
    while (done < nsteps) {
        long chunk = std::min<long>(cfg.record_stride, nsteps - done);
        st.advance(u, h, chunk, done * h);
        done += chunk;
        traj.times.push_back(done == nsteps ? T : done * h);
        traj.fields.emplace_back(u0.spec(), u);
    }
    return traj;
}

namespace {

struct PicardState {
    GridSpec spec;
    double a;
    std::vector<double> times;
    cvec u0hat;
    rvec w;  // 1 + |ξ|²
};

// Φ(v) in the interaction picture: W(t_i) = û0 − iρ ∫_a^{t_i} e^{−i(s−a)Δ} F(v|v|²) ds.
std::vector<cvec> apply_phi(const PicardState& ps, const std::vector<Field>& v, double rho) {
    std::size_t n = ps.times.size();
    std::vector<cvec> W(n, ps.u0hat);
    if (rho == 0.0) return W;
    std::vector<cvec> G(n);
    for (std::size_t i = 0; i < n; ++i) {
        cvec nl = v[i].values();
        for (cplx& z : nl) z *= std::norm(z);
        Spectrum s = forward_fourier(Field(ps.spec, std::move(nl)));
        G[i] = spectral::propagate(s, -(ps.times[i] - ps.a)).coeffs();
    }
    cvec acc(ps.u0hat.size());
    cplx scale(0.0, -rho);
    for (std::size_t i = 1; i < n; ++i) {
        double half = 0.5 * (ps.times[i] - ps.times[i - 1]);
        K().axpy(half * scale, G[i - 1].data(), acc.data(), acc.size());
        K().axpy(half * scale, G[i].data(), acc.data(), acc.size());
        K().axpy(cplx(1.0, 0.0), acc.data(), W[i].data(), acc.size());
    }
    return W;
}

std::vector<Field> to_physical(const PicardState& ps, const std::vector<cvec>& W) {
    std::vector<Field> v;
    v.reserve(W.size());
    for (std::size_t i = 0; i < W.size(); ++i)
        v.push_back(inverse_fourier(spectral::propagate(Spectrum(ps.spec, W[i]), ps.times[i] - ps.a)));
    return v;
}

double sup_h1_diff(const PicardState& ps, const std::vector<cvec>& A, const std::vector<cvec>& B) {
    double m = 0.0;
    cvec d(ps.u0hat.size());
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = A[i][k] - B[i][k];
        m = std::max(m, std::sqrt(K().weighted_abs2(d.data(), ps.w.data(), d.size()) / ps.spec.volume()));
    }
    return m;
}

}  // namespace

PicardResult picard_solve(const Field& u0, Interval I, const SolveConfig& cfg) {
    cfg.validate();
    require(I.hi > I.lo, ErrorKind::OutOfRange, "empty interval");
    require(I.length() <= 1.0 + 1e-12, ErrorKind::OutOfRange, "picard_solve needs |I| <= 1");
    check_resolution(u0, cfg.resolution_tol);

    PicardState ps;
    ps.spec = u0.spec();
    ps.a = I.lo;
    long n = std::max(1L, static_cast<long>(std::ceil(I.length() / cfg.dt - 1e-9)));
    for (long i = 0; i <= n; ++i) ps.times.push_back(i == n ? I.hi : I.lo + I.length() * i / n);
    ps.u0hat = forward_fourier(u0).coeffs();
    ps.w = laplace_symbol(ps.spec);
    for (double& x : ps.w) x += 1.0;

    PicardResult res;
    std::vector<cvec> W(ps.times.size(), ps.u0hat);
    std::vector<Field> v = to_physical(ps, W);
    {
        Trajectory lin{ps.spec, ps.times, v, I.length() / n};
        res.linear_zprime = ps.times.size() >= 2 ? norms::zprime_norm(lin, I) : 0.0;
    }
    int bad = 0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        std::vector<cvec> Wn = apply_phi(ps, v, cfg.rho);
        double diff = sup_h1_diff(ps, Wn, W);
        if (!std::isfinite(diff)) fail(ErrorKind::NumericalAbort, "non-finite Picard iterate");
        if (!res.differences.empty() && res.differences.back() > 0.0) {
            double r = diff / res.differences.back();
            res.ratios.push_back(r);
            bad = r >= 1.0 ? bad + 1 : 0;
        }
        res.differences.push_back(diff);
        W = std::move(Wn);
        v = to_physical(ps, W);
        res.iterations = it;
        if (bad >= 3) {
            std::ostringstream os;
            os << "contraction ratios >= 1 for 3 consecutive iterations (last " << res.ratios.back()
               << "); ||e^{itD}u0||_Z' = " << res.linear_zprime;
            fail(ErrorKind::NonContraction, os.str());
        }
        if (diff < cfg.tol) break;
        if (it == cfg.max_iter)
            fail(ErrorKind::NumericalAbort, "Picard iteration did not reach tol within max_iter");
    }
    std::vector<cvec> check = apply_phi(ps, v, cfg.rho);
    res.duhamel_residual = sup_h1_diff(ps, check, W);
    res.trajectory = Trajectory{ps.spec, ps.times, std::move(v), I.length() / n};
    return res;
}

double duhamel_residual(const Trajectory& u, const Field& u0, double rho) {
    u.validate();
    PicardState ps;
    ps.spec = u.spec;
    ps.a = u.times.front();
    ps.times = u.times;
    ps.u0hat = forward_fourier(u0).coeffs();
    ps.w = laplace_symbol(ps.spec);
    for (double& x : ps.w) x += 1.0;
    std::vector<cvec> W = apply_phi(ps, u.fields, rho);
    std::vector<cvec> cur;
    for (std::size_t i = 0; i < u.size(); ++i)
        cur.push_back(spectral::propagate(forward_fourier(u.fields[i]), -(u.times[i] - ps.a)).coeffs());
    return sup_h1_diff(ps, W, cur);
}

ConservationTable check_conservation(const Trajectory& u) {
    u.validate();
    ConservationTable tab;
    for (std::size_t i = 0; i < u.size(); ++i) {
        norms::MassEnergy me = norms::mass_energy(u.fields[i]);
        tab.rows.push_back({u.times[i], me.mass, me.energy});
    }
    const ConservationRow& r0 = tab.rows.front();
    for (const auto& r : tab.rows) {
        if (r0.mass > 0.0) tab.mass_drift = std::max(tab.mass_drift, std::fabs(r.mass - r0.mass) / r0.mass);
        if (r0.energy > 0.0) tab.energy_drift = std::max(tab.energy_drift, std::fabs(r.energy - r0.energy) / r0.energy);
    }
    return tab;
}

Trajectory equation_residual(const Trajectory& u, double rho) {
    u.validate();
    require(u.size() >= 3, ErrorKind::OutOfRange, "residual needs at least three samples");
    Trajectory e;
    e.spec = u.spec;
    e.dt = u.dt;
    rvec k2 = laplace_symbol(u.spec);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        double h = u.times[i + 1] - u.times[i - 1];
        Spectrum s = forward_fourier(u.fields[i]);
        for (std::size_t k = 0; k < k2.size(); ++k) s.coeffs()[k] *= -k2[k];
        Field lap = inverse_fourier(s);
        cvec r(u.spec.size());
        for (std::size_t k = 0; k < r.size(); ++k) {
            cplx ut = (u.fields[i + 1][k] - u.fields[i - 1][k]) / h;
            cplx z = u.fields[i][k];
            r[k] = cplx(0.0, 1.0) * ut + lap[k] - rho * z * std::norm(z);
        }
        e.times.push_back(u.times[i]);
        e.fields.emplace_back(u.spec, std::move(r));
    }
    return e;
}

StabilityReport stability_experiment(const Trajectory& base, const Trajectory& e, const Field& u0,
                                     const SolveConfig& cfg) {
    base.validate();
    require(u0.spec() == base.spec, ErrorKind::DimensionMismatch, "u0 and base grids differ");
    StabilityReport rep;
    auto diff_h1 = [](const Field& a, const Field& b) {
        cvec d = a.values();
        for (std::size_t k = 0; k < d.size(); ++k) d[k] -= b[k];
        return norms::h1_norm(Field(a.spec(), std::move(d)));
    };
    rep.data_term = diff_h1(u0, base.fields.front());
    rep.forcing_term = e.fields.size() >= 2 ? norms::duhamel_norm(e, e.span()).value : 0.0;
    rep.eps_in = rep.data_term + rep.forcing_term;

    std::vector<double> later(base.times.begin() + 1, base.times.end());
    std::vector<Field> u = evolve_at(u0, base.times.front(), later, cfg);
    rep.deviation = rep.data_term;
    for (std::size_t i = 0; i < u.size(); ++i) rep.deviation = std::max(rep.deviation, diff_h1(u[i], base.fields[i + 1]));
    rep.amplification = rep.eps_in > 0.0 ? rep.deviation / rep.eps_in : 0.0;
    return rep;
}

EuclidComparison euclidean_comparison(const EuclidField& phi, double N, double R, double T0, const SolveConfig& cfg,
                                      const EuclidOptions& opt) {
    require(N >= 1.0 && R > 0.0 && T0 > 0.0, ErrorKind::OutOfRange, "euclidean_comparison needs N >= 1, R > 0, T0 > 0");
    require(opt.samples >= 1, ErrorKind::Config, "samples must be >= 1");
    EuclidComparison rep;
    rep.N = N;
    rep.R = R;
    rep.T0 = T0;
    rep.support_condition = N >= 10.0 * R;
    if (!rep.support_condition) rep.flags.push_back("N < 10R");
    bool wraps = false;
    for (int a = 0; a < 4; ++a) wraps = wraps || 2.0 * R / N >= 0.5 * opt.torus.period(a);
    if (wraps) rep.flags.push_back("window wider than the fundamental domain; images summed");

    Field fN = profiles::rescale_TN(phi, N, opt.torus);
    rep.torus_tail = resolution_tail(fN);
    rep.box_tail = resolution_tail(phi);
    double tail = std::max(rep.torus_tail, rep.box_tail);
    if (tail > opt.max_tail)
        fail(ErrorKind::Resolution, "scale N is not represented: torus tail " + std::to_string(rep.torus_tail) +
                                        ", box tail " + std::to_string(rep.box_tail));
    if (tail > cfg.resolution_tol) rep.flags.push_back("resolution tail above tolerance");

    double half = T0 / (N * N);
    for (int j = -opt.samples; j <= opt.samples; ++j) rep.times.push_back(half * j / opt.samples);
    SolveConfig torus_cfg = cfg;
    torus_cfg.resolution_tol = std::max(cfg.resolution_tol, opt.max_tail);
    std::vector<Field> U = evolve_at(fN, 0.0, rep.times, torus_cfg);

    SolveConfig box_cfg = torus_cfg;
    box_cfg.dt = cfg.dt * N * N;
    std::vector<double> s;
    for (double t : rep.times) s.push_back(t * N * N);
    std::vector<EuclidField> V = evolve_at(phi, 0.0, s, box_cfg);

    for (std::size_t j = 0; j < rep.times.size(); ++j) {
        Field VRN = profiles::transfer_to_torus(V[j], N, R, opt.torus, true);
        cvec d = U[j].values();
        for (std::size_t k = 0; k < d.size(); ++k) d[k] -= VRN[k];
        double h1 = norms::h1_norm(Field(opt.torus, std::move(d)));
        rep.discrepancy.push_back(h1);
        rep.sup_discrepancy = std::max(rep.sup_discrepancy, h1);
    }
    return rep;
}

BlowupSeries blowup_monitor(const Trajectory& u, int pieces, double growth_factor) {
    u.validate();
    require(pieces >= 1, ErrorKind::OutOfRange, "pieces must be >= 1");
    BlowupSeries out;
    out.growth_factor = growth_factor;
    std::size_t n = u.size() - 1;
    std::size_t p = std::min<std::size_t>(pieces, n);
    for (std::size_t k = 0; k < p; ++k) {
        Interval J{u.times[n * k / p], u.times[n * (k + 1) / p]};
        out.pieces.push_back(J);
        out.z.push_back(norms::z_norm(u, J).value);
    }
    double first = out.z.front();
    double mx = *std::max_element(out.z.begin(), out.z.end());
    out.growth_flag = first > 0.0 ? mx > growth_factor * first : mx > 0.0;
    return out;
}

}  // namespace spnls::solver
