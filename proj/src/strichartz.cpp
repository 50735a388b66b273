#include "spnls/strichartz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "spnls/csv.hpp"
#include "spnls/ensemble.hpp"
#include "spnls/error.hpp"
#include "spnls/fft.hpp"
#include "spnls/kernels.hpp"
#include "spnls/norms.hpp"
#include "spnls/parallel.hpp"
#include "spnls/rescale.hpp"
#include "spnls/solver.hpp"
#include "spnls/spectral.hpp"

namespace spnls::strichartz {
namespace {

const simd::KernelTable& K() { return simd::active(); }

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
    std::vector<double> w(t.size(), 0.0);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        double h = 0.5 * (t[i + 1] - t[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    return w;
}

// Physical samples of e^{itΔ} applied to coefficients c (optionally times a real multiplier).
void free_wave(const GridSpec& spec, const cvec& c, double t, cvec& out, const rvec* m = nullptr) {
    cvec ph = spectral::propagator_phase(spec, t);
    out = c;
    K().mul_complex(out.data(), ph.data(), out.size());
    if (m) K().scale_real(out.data(), m->data(), out.size());
    auto dims = spec.dims();
    fft::transform(out.data(), dims, fft::Direction::Backward);
    double inv = 1.0 / spec.volume();
    for (auto& z : out) z *= inv;
}

double sum_abs_pow(const cvec& v, double p) {
    if (p == 4.0) return K().sum_abs4(v.data(), v.size());
    if (p == 2.0) return K().sum_abs2(v.data(), v.size());
    double s = 0.0;
    for (const cplx& z : v) s += std::pow(std::norm(z), 0.5 * p);
    return s;
}

rvec support_indicator(const rvec& w) {
    rvec s(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) s[i] = w[i] != 0.0 ? 1.0 : 0.0;
    return s;
}

void summarize(ScalingReport& rep) {
    rep.max_raw.assign(rep.Ns.size(), 0.0);
    rep.max_constant.assign(rep.Ns.size(), 0.0);
    for (const auto& pt : rep.points) {
        std::size_t i = std::find(rep.Ns.begin(), rep.Ns.end(), pt.N) - rep.Ns.begin();
        rep.max_raw[i] = std::max(rep.max_raw[i], pt.raw);
        rep.max_constant[i] = std::max(rep.max_constant[i], pt.constant);
    }
    if (rep.Ns.size() >= 2) rep.fit = fit_loglog(rep.Ns, rep.max_raw);
}

std::string describe(const ScanOptions& opt) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "nper=4N n1=4N*L1 L1=%d t=[%g,%g] samples=%d seed=%llu", opt.L1, opt.t_lo, opt.t_hi,
                  opt.time_samples, static_cast<unsigned long long>(opt.seed));
    return buf;
}

void check_scan_N(const std::vector<int>& Ns) {
    require(!Ns.empty(), ErrorKind::OutOfRange, "scan needs at least one N");
    for (int N : Ns) spectral::require_dyadic(N, "scan N");
}

}  // namespace

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::OutOfRange, "fit needs at least two points");
    std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, ErrorKind::OutOfRange, "log-log fit needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n, my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    require(sxx > 0.0, ErrorKind::OutOfRange, "log-log fit needs distinct x");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) r2 += std::pow(ly[i] - f.intercept - f.slope * lx[i], 2);
    f.residual = std::sqrt(r2 / n);
    return f;
}

double ScalingReport::max_over_grid() const {
    return max_constant.empty() ? 0.0 : *std::max_element(max_constant.begin(), max_constant.end());
}

double ScalingReport::constant_spread() const {
    if (max_constant.empty()) return 1.0;
    double lo = *std::min_element(max_constant.begin(), max_constant.end());
    return lo > 0.0 ? max_over_grid() / lo : INFINITY;
}

std::string ScalingReport::csv() const {
    csv::Table t({"p", "N", "draw", "raw", "constant"});
    for (const auto& pt : points) t.add({csv::num(p), csv::num(pt.N), csv::num(pt.draw), csv::num(pt.raw), csv::num(pt.constant)});
    std::string out = t.str();
    out += "# summary,slope=" + csv::num(fit.slope) + ",residual=" + csv::num(fit.residual) +
           ",predicted=" + csv::num(predicted_exponent) + ",max_constant=" + csv::num(max_over_grid()) +
           ",ensemble=" + csv::num(ensemble) + "\n";
    return out;
}

GridSpec scan_grid(int N, int L1) {
    spectral::require_dyadic(N, "scan N");
    require(L1 >= 1 && is_pow2(L1), ErrorKind::Config, "scan L1 must be a power of two");
    GridSpec g{L1, std::max(4, 4 * N * L1), std::max(4, 4 * N)};
    g.validate();
    return g;
}

std::vector<double> uniform_times(double lo, double hi, int n) {
    require(n >= 2 && hi > lo, ErrorKind::OutOfRange, "time grid needs n >= 2 and hi > lo");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    return t;
}

double spacetime_lp(const Spectrum& f, double p, const std::vector<double>& times) {
    require(p >= 1.0 && std::isfinite(p), ErrorKind::OutOfRange, "p must be finite and >= 1");
    std::vector<double> w = trapezoid_weights(times);
    double dV = f.spec().cell_volume(), acc = 0.0;
    cvec u;
    for (std::size_t j = 0; j < times.size(); ++j) {
        free_wave(f.spec(), f.coeffs(), times[j], u);
        acc += w[j] * sum_abs_pow(u, p) * dV;
    }
    return std::pow(acc, 1.0 / p);
}

ScalingReport strichartz_scan(double p, const std::vector<int>& Ns, int ensemble, const ScanOptions& opt) {
    check_scan_N(Ns);
    require(ensemble >= 1, ErrorKind::OutOfRange, "ensemble must be >= 1");
    ScalingReport rep;
    rep.name = "strichartz";
    rep.p = p;
    rep.predicted_exponent = 2.0 - 6.0 / p;
    rep.ensemble = ensemble;
    rep.grid = describe(opt);
    if (p <= 3.6) rep.flags.push_back("p <= 18/5: no uniform bound expected");
    else if (p < 3.85) rep.flags.push_back("p near the threshold 18/5");
    std::vector<double> times = uniform_times(opt.t_lo, opt.t_hi, opt.time_samples);

    for (int N : Ns) {
        rep.Ns.push_back(N);
        GridSpec spec = scan_grid(N, opt.L1);
        rvec w = spectral::shell_multiplier(spec, N);
        rvec ind = support_indicator(w);
        std::vector<ScanPoint> pts(ensemble);
        parallel_for(ensemble, [&](std::size_t d) {
            auto rng = ensemble::make_rng(opt.seed, {0x5354ULL, static_cast<std::uint64_t>(N), d});
            auto kind = d % 2 == 0 ? ensemble::DrawKind::Coherent : ensemble::DrawKind::Gaussian;
            Spectrum f = spectral::multiply(ensemble::weighted_draw(spec, ind, rng, kind, opt.t_lo, opt.t_hi), w);
            double raw = spacetime_lp(f, p, times);
            pts[d] = {double(N), int(d), raw, raw / std::pow(double(N), rep.predicted_exponent)};
        });
        rep.points.insert(rep.points.end(), pts.begin(), pts.end());
    }
    summarize(rep);
    return rep;
}

ScalingReport dispersive_scan(const std::vector<int>& Ns, double t_lo, double t_hi, int family, int t_samples,
                              const ScanOptions& opt) {
    check_scan_N(Ns);
    require(t_lo > 0.0 && t_hi > t_lo, ErrorKind::OutOfRange, "dispersive scan needs 0 < t_lo < t_hi");
    require(family >= 1 && t_samples >= 2, ErrorKind::OutOfRange, "family and t_samples must be positive");
    ScalingReport rep;
    rep.name = "dispersive";
    rep.predicted_exponent = 3.0;
    rep.ensemble = family;
    char buf[96];
    std::snprintf(buf, sizeof buf, "nper=4N n1=4N*L1 L1=%d t=[%g,%g] log-spaced samples=%d", opt.L1, t_lo, t_hi, t_samples);
    rep.grid = buf;
    std::vector<double> times(t_samples);
    for (int j = 0; j < t_samples; ++j) times[j] = t_lo * std::pow(t_hi / t_lo, double(j) / (t_samples - 1));

    for (int N : Ns) {
        rep.Ns.push_back(N);
        GridSpec spec = scan_grid(N, opt.L1);
        rvec w = spectral::shell_multiplier(spec, N);
        std::vector<ScanPoint> pts(family);
        parallel_for(family, [&](std::size_t d) {
            cvec v(spec.size());
            if (d == 0) {
                v[0] = 1.0;
            } else {
                auto rng = ensemble::make_rng(opt.seed, {0x4449ULL, static_cast<std::uint64_t>(N), d});
                std::uniform_int_distribution<std::size_t> site(0, spec.size() - 1);
                std::bernoulli_distribution sign;
                for (int k = 0; k < 4; ++k) v[site(rng)] += sign(rng) ? 1.0 : -1.0;
            }
            double l1 = 0.0;
            for (const cplx& z : v) l1 += std::abs(z);
            l1 *= spec.cell_volume();
            Spectrum f = spectral::multiply(forward_fourier(Field(spec, v)), w);
            double best = 0.0;
            cvec u;
            for (double t : times) {
                free_wave(spec, f.coeffs(), t, u);
                best = std::max(best, std::sqrt(K().max_abs2(u.data(), u.size()) * t));
            }
            double raw = l1 > 0.0 ? best / l1 : 0.0;
            pts[d] = {double(N), int(d), raw, raw / std::pow(double(N), 3.0)};
        });
        rep.points.insert(rep.points.end(), pts.begin(), pts.end());
    }
    summarize(rep);
    return rep;
}

double local_smoothing_check(const Field& phi, double delta, int K_, const ScanOptions& opt) {
    require(delta > 0.0 && delta <= 1.0, ErrorKind::OutOfRange, "delta must lie in (0, 1]");
    spectral::require_dyadic(K_, "K");
    const GridSpec& spec = phi.spec();
    double l2 = norms::l2_norm(phi);
    require(l2 > 0.0, ErrorKind::OutOfRange, "local smoothing ratio undefined for the zero field");

    rvec m = spectral::shell_multiplier(spec, K_);
    rvec td = spectral::tilde_delta_multiplier(spec, delta < 1.0 ? delta : std::nextafter(1.0, 0.0));
    for (std::size_t i = 0; i < m.size(); ++i) m[i] *= td[i];
    Spectrum c = spectral::multiply(forward_fourier(phi), m);

    std::vector<double> times = uniform_times(opt.t_lo, opt.t_hi, opt.time_samples);
    std::vector<double> wt = trapezoid_weights(times);
    std::size_t slice = static_cast<std::size_t>(spec.nper) * spec.nper * spec.nper;
    std::vector<double> acc(spec.n1, 0.0);
    double norm = std::pow(kTwoPi, 3) / (spec.volume() * spec.volume());
    auto dims = spec.dims();
    cvec d(spec.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        // |e^{−it|ξ'|²}| = 1, so only the ξ1 phase affects the x'-energy of each slice.
        for (int i1 = 0; i1 < spec.n1; ++i1) {
            double f = spec.freq(0, i1);
            cplx ph = std::polar(1.0, -std::fmod(times[j] * f * f, kTwoPi));
            for (std::size_t k = 0; k < slice; ++k) d[i1 * slice + k] = c.coeffs()[i1 * slice + k] * ph;
        }
        fft::transform_axis(d.data(), dims, 0, fft::Direction::Backward);
        for (int i1 = 0; i1 < spec.n1; ++i1) acc[i1] += wt[j] * norm * K().sum_abs2(d.data() + i1 * slice, slice);
    }
    double num = std::sqrt(*std::max_element(acc.begin(), acc.end()));
    return num / (std::pow(delta * K_, -0.5) * l2);
}

ScalingReport local_smoothing_scan(double delta, const std::vector<int>& Ks, int ensemble, const ScanOptions& opt) {
    check_scan_N(Ks);
    require(ensemble >= 1, ErrorKind::OutOfRange, "ensemble must be >= 1");
    ScalingReport rep;
    rep.name = "local_smoothing";
    rep.p = 2.0;
    rep.ensemble = ensemble;
    rep.grid = describe(opt);
    for (int Kd : Ks) {
        rep.Ns.push_back(Kd);
        GridSpec spec = scan_grid(Kd, opt.L1);
        rvec ind = support_indicator(spectral::shell_multiplier(spec, Kd));
        std::vector<ScanPoint> pts(ensemble);
        parallel_for(ensemble, [&](std::size_t d) {
            auto rng = ensemble::make_rng(opt.seed, {0x4c53ULL, static_cast<std::uint64_t>(Kd), d});
            auto kind = d % 2 == 0 ? ensemble::DrawKind::Coherent : ensemble::DrawKind::Gaussian;
            Field phi = inverse_fourier(ensemble::weighted_draw(spec, ind, rng, kind, opt.t_lo, opt.t_hi));
            double r = local_smoothing_check(phi, delta, Kd, opt);
            pts[d] = {double(Kd), int(d), r, r};
        });
        rep.points.insert(rep.points.end(), pts.begin(), pts.end());
    }
    summarize(rep);
    return rep;
}

std::string BilinearReport::csv() const {
    csv::Table t({"N1", "N2", "gain", "product", "ratio"});
    for (const auto& p : points)
        t.add({csv::num(p.N1), csv::num(p.N2), csv::num(p.gain), csv::num(p.product), csv::num(p.ratio)});
    return t.str() + "# summary,kappa=" + csv::num(kappa) + ",residual=" + csv::num(fit.residual) +
           ",ensemble=" + csv::num(ensemble) + "\n";
}

BilinearReport bilinear_scan(const std::vector<int>& Ns_in, int ensemble, const ScanOptions& opt) {
    check_scan_N(Ns_in);
    std::vector<int> Ns = Ns_in;
    std::sort(Ns.begin(), Ns.end());
    Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < Ns.size(); ++a)
        for (std::size_t b = 0; b <= a; ++b) pairs.emplace_back(Ns[a], Ns[b]);
    return bilinear_scan(pairs, ensemble, opt);
}

BilinearReport bilinear_scan(const std::vector<std::pair<int, int>>& pairs, int ensemble, const ScanOptions& opt) {
    require(!pairs.empty(), ErrorKind::OutOfRange, "bilinear scan needs at least one pair");
    require(ensemble >= 1, ErrorKind::OutOfRange, "ensemble must be >= 1");
    for (auto [N1, N2] : pairs) {
        spectral::require_dyadic(N1, "N1");
        spectral::require_dyadic(N2, "N2");
        require(N1 >= N2, ErrorKind::OutOfRange, "bilinear scan needs N1 >= N2");
    }
    BilinearReport rep;
    rep.ensemble = ensemble;
    rep.flags.push_back("Y0 factor measured as the L2 norm of the data; Z' uses sup-in-time H1");
    double t_lo = 0.0, t_hi = 1.0;
    std::vector<double> times = uniform_times(t_lo, t_hi, opt.time_samples);
    std::vector<double> wt = trapezoid_weights(times);

    for (auto [N1, N2] : pairs) {
        GridSpec spec = scan_grid(N1, opt.L1);
        rvec ind1 = support_indicator(spectral::shell_multiplier(spec, N1));
        rvec ind2 = support_indicator(spectral::shell_multiplier(spec, N2));
        int top = spectral::top_dyadic(spec);
        std::vector<rvec> shells;
        std::vector<int> shellN;
        for (int M = 1; M <= top; M *= 2) {
            rvec wm = spectral::shell_multiplier(spec, M);
            bool overlap = false;
            for (std::size_t i = 0; i < wm.size() && !overlap; ++i) overlap = wm[i] != 0.0 && ind2[i] != 0.0;
            if (overlap) {
                shells.push_back(std::move(wm));
                shellN.push_back(M);
            }
        }
        std::vector<double> prod(ensemble), ratio(ensemble);
        parallel_for(ensemble, [&](std::size_t d) {
            auto rng = ensemble::make_rng(opt.seed, {0x424cULL, static_cast<std::uint64_t>(N1),
                                                     static_cast<std::uint64_t>(N2), d});
            auto kind = d % 2 == 0 ? ensemble::DrawKind::Coherent : ensemble::DrawKind::Gaussian;
            Spectrum f1 = ensemble::weighted_draw(spec, ind1, rng, kind, t_lo, t_hi);
            Spectrum f2 = ensemble::weighted_draw(spec, ind2, rng, kind, t_lo, t_hi);
            double dV = spec.cell_volume(), p2 = 0.0, z4 = 0.0;
            cvec u1, u2, um;
            for (std::size_t j = 0; j < times.size(); ++j) {
                free_wave(spec, f1.coeffs(), times[j], u1);
                free_wave(spec, f2.coeffs(), times[j], u2);
                K().mul_complex(u1.data(), u2.data(), u1.size());
                p2 += wt[j] * K().sum_abs2(u1.data(), u1.size()) * dV;
                double dens = 0.0;
                for (std::size_t s = 0; s < shells.size(); ++s) {
                    free_wave(spec, f2.coeffs(), times[j], um, &shells[s]);
                    dens += double(shellN[s]) * shellN[s] * K().sum_abs4(um.data(), um.size()) * dV;
                }
                z4 += wt[j] * dens;
            }
            double zprime = std::pow(z4, 0.1875) * std::pow(norms::h1_norm(f2), 0.25);
            prod[d] = std::sqrt(p2);
            ratio[d] = zprime > 0.0 ? prod[d] / zprime : 0.0;
        });
        BilinearPoint pt;
        pt.N1 = N1;
        pt.N2 = N2;
        pt.gain = double(N2) / N1 + 1.0 / N2;
        pt.product = *std::max_element(prod.begin(), prod.end());
        pt.ratio = *std::max_element(ratio.begin(), ratio.end());
        rep.points.push_back(pt);
    }
    std::vector<double> g, r;
    for (const auto& p : rep.points) {
        g.push_back(p.gain);
        r.push_back(p.ratio);
    }
    bool distinct = std::any_of(g.begin(), g.end(), [&](double v) { return v != g.front(); });
    if (rep.points.size() >= 2 && distinct) {
        rep.fit = fit_loglog(g, r);
        rep.kappa = rep.fit.slope;
    }
    return rep;
}

std::string ExtinctionReport::csv() const {
    csv::Table t({"N", "T1", "core", "M", "l6_outside"});
    for (auto& [M, v] : shell_l6) t.add({csv::num(N), csv::num(T1), csv::num(core), csv::num(M), csv::num(v)});
    return t.str() + "# summary,z_outside=" + csv::num(z_outside) + "\n";
}

ExtinctionReport extinction_check(const EuclidField& psi, double N, double T1, const GridSpec& torus, int samples) {
    require(T1 > 0.0 && N >= 1.0, ErrorKind::OutOfRange, "extinction needs T1 > 0 and N >= 1");
    require(samples >= 2, ErrorKind::OutOfRange, "samples must be >= 2");
    require(N <= 0.5 * torus.nyquist(), ErrorKind::OutOfRange, "extinction needs N <= Nyquist/2");
    ExtinctionReport rep;
    rep.N = N;
    rep.T1 = T1;
    rep.core = T1 / (N * N);
    int top = spectral::top_dyadic(torus);
    for (int M = 1; M <= top; M *= 2) rep.shell_l6.emplace_back(M, 0.0);
    if (rep.core >= 1.0) {
        rep.flags.push_back("core covers [-1, 1]");
        return rep;
    }
    Field f = profiles::rescale_TN(psi, N, torus);
    double tail = solver::resolution_tail(f);
    if (tail > 1e-8) rep.flags.push_back("resolution tail " + csv::num(tail));
    Spectrum fh = forward_fourier(f);
    std::vector<rvec> shells;
    for (int M = 1; M <= top; M *= 2) shells.push_back(spectral::shell_multiplier(torus, M));

    // Geometric nodes from the core edge to 1 follow the |t|^{-1/2} decay.
    std::vector<double> nodes(samples);
    for (int j = 0; j < samples; ++j) nodes[j] = j == samples - 1 ? 1.0 : rep.core * std::pow(1.0 / rep.core, double(j) / (samples - 1));
    std::vector<double> wt = trapezoid_weights(nodes);
    double dV = torus.cell_volume();
    std::vector<double> l6(shells.size(), 0.0);
    double zside[2] = {0.0, 0.0};
    for (int side = 0; side < 2; ++side) {
        double sgn = side == 0 ? 1.0 : -1.0;
        std::vector<std::vector<double>> vals(nodes.size(), std::vector<double>(shells.size() * 2));
        parallel_for(nodes.size(), [&](std::size_t j) {
            cvec u;
            for (std::size_t s = 0; s < shells.size(); ++s) {
                free_wave(torus, fh.coeffs(), sgn * nodes[j], u, &shells[s]);
                double M = double(1 << s);
                vals[j][2 * s] = M * M * K().sum_abs4(u.data(), u.size()) * dV;
                vals[j][2 * s + 1] = sum_abs_pow(u, 6.0) * dV;
            }
        });
        for (std::size_t j = 0; j < nodes.size(); ++j)
            for (std::size_t s = 0; s < shells.size(); ++s) {
                zside[side] += wt[j] * vals[j][2 * s];
                l6[s] += wt[j] * vals[j][2 * s + 1];
            }
    }
    rep.z_outside = std::pow(std::max(zside[0], zside[1]), 0.25);
    for (std::size_t s = 0; s < shells.size(); ++s) rep.shell_l6[s].second = std::pow(l6[s], 1.0 / 6.0);
    return rep;
}

}  // namespace spnls::strichartz
