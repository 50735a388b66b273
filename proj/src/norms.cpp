#include "spnls/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "spnls/error.hpp"
#include "spnls/kernels.hpp"
#include "spnls/spectral.hpp"

namespace spnls {

void Trajectory::validate() const {
    require(times.size() >= 2, ErrorKind::InvariantViolation, "trajectory needs at least two samples");
    require(times.size() == fields.size(), ErrorKind::DimensionMismatch, "times/fields length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        require(times[i] > times[i - 1], ErrorKind::InvariantViolation, "times must be strictly increasing");
    for (const Field& f : fields) require(f.spec() == spec, ErrorKind::DimensionMismatch, "trajectory spec mismatch");
}

bool Trajectory::uniform(double rel_tol) const {
    if (times.size() < 3) return true;
    double h = (times.back() - times.front()) / (times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::fabs(times[i] - times[i - 1] - h) > rel_tol * std::fabs(h)) return false;
    return true;
}

}  // namespace spnls

namespace spnls::norms {
namespace {

const simd::KernelTable& K() { return simd::active(); }

rvec one_plus_k2(const GridSpec& spec) {
    rvec w = laplace_symbol(spec);
    for (double& v : w) v += 1.0;
    return w;
}

// Indices of samples inside I (with a small tolerance on the ends).
std::pair<std::size_t, std::size_t> sample_range(const Trajectory& u, Interval I) {
    double tol = 1e-12 * std::max(1.0, std::fabs(I.hi) + std::fabs(I.lo));
    std::size_t a = 0;
    while (a < u.times.size() && u.times[a] < I.lo - tol) ++a;
    std::size_t b = a;
    while (b < u.times.size() && u.times[b] <= I.hi + tol) ++b;
    require(b >= a + 2, ErrorKind::OutOfRange, "interval contains fewer than two trajectory samples");
    return {a, b - 1};
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y, std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t i = a; i < b; ++i) s += 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);
    return s;
}

}  // namespace

std::string NormReport::csv_row() const {
    char buf[128];
    std::string row = name;
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g", interval.lo, interval.hi, value);
    row += buf;
    for (auto& [N, v] : breakdown) {
        std::snprintf(buf, sizeof buf, ",%d:%.17g", N, v);
        row += buf;
    }
    return row;
}

double l2_norm(const Field& f) { return std::sqrt(K().sum_abs2(f.values().data(), f.size()) * f.spec().cell_volume()); }

double l2_norm(const EuclidField& f) {
    return std::sqrt(K().sum_abs2(f.values().data(), f.size()) * f.spec().cell_volume());
}

double lp_norm(const Field& f, double p) {
    require(p >= 1.0, ErrorKind::OutOfRange, "p must be >= 1");
    const cvec& v = f.values();
    if (std::isinf(p)) return std::sqrt(K().max_abs2(v.data(), v.size()));
    if (p == 2.0) return l2_norm(f);
    double dV = f.spec().cell_volume();
    if (p == 4.0) return std::pow(K().sum_abs4(v.data(), v.size()) * dV, 0.25);
    double s = 0.0;
    for (const cplx& z : v) s += std::pow(std::abs(z), p);
    return std::pow(s * dV, 1.0 / p);
}

double h1_norm(const Spectrum& s) {
    rvec w = one_plus_k2(s.spec());
    return std::sqrt(K().weighted_abs2(s.coeffs().data(), w.data(), s.size()) / s.spec().volume());
}

double h1_norm(const Field& f) { return h1_norm(forward_fourier(f)); }

double hdot1_norm(const Field& f) {
    Spectrum s = forward_fourier(f);
    rvec w = laplace_symbol(f.spec());
    return std::sqrt(K().weighted_abs2(s.coeffs().data(), w.data(), s.size()) / f.spec().volume());
}

double hdot1_norm(const EuclidField& f) {
    EuclidSpectrum s = forward_fourier(f);
    rvec w = laplace_symbol(f.spec());
    return std::sqrt(K().weighted_abs2(s.coeffs().data(), w.data(), s.size()) / f.spec().volume());
}

double h1_norm(const EuclidField& f) {
    double a = l2_norm(f), b = hdot1_norm(f);
    return std::sqrt(a * a + b * b);
}

MassEnergy mass_energy(const Field& f) {
    Spectrum s = forward_fourier(f);
    rvec k2 = laplace_symbol(f.spec());
    double vol = f.spec().volume();
    MassEnergy me;
    me.mass = K().sum_abs2(f.values().data(), f.size()) * f.spec().cell_volume();
    double grad = K().weighted_abs2(s.coeffs().data(), k2.data(), s.size()) / vol;
    double quart = K().sum_abs4(f.values().data(), f.size()) * f.spec().cell_volume();
    me.energy = 0.5 * grad + 0.25 * quart;
    return me;
}

MassEnergy mass_energy(const EuclidField& f) {
    EuclidSpectrum s = forward_fourier(f);
    rvec k2 = laplace_symbol(f.spec());
    MassEnergy me;
    me.mass = K().sum_abs2(f.values().data(), f.size()) * f.spec().cell_volume();
    double grad = K().weighted_abs2(s.coeffs().data(), k2.data(), s.size()) / f.spec().volume();
    me.energy = 0.5 * grad + 0.25 * K().sum_abs4(f.values().data(), f.size()) * f.spec().cell_volume();
    return me;
}

std::vector<double> z_density(const Field& f) {
    const GridSpec& spec = f.spec();
    Spectrum s = forward_fourier(f);
    std::vector<double> out;
    for (int N = 1; N <= spectral::top_dyadic(spec); N *= 2) {
        Field p = inverse_fourier(spectral::multiply(s, spectral::shell_multiplier(spec, N)));
        out.push_back(double(N) * N * K().sum_abs4(p.values().data(), p.size()) * spec.cell_volume());
    }
    return out;
}

NormReport z_norm(const Trajectory& u, Interval I) {
    u.validate();
    auto [a, b] = sample_range(u, I);
    NormReport rep;
    rep.name = "Z";
    rep.interval = I;

    std::vector<std::vector<double>> dens(u.size());
    for (std::size_t i = a; i <= b; ++i) dens[i] = z_density(u.fields[i]);
    std::size_t nshell = dens[a].size();

    // Coarsest dyadic level whose pieces have length ≤ 1; finer pieces are dominated.
    std::size_t pieces = 1;
    double len = u.times[b] - u.times[a];
    while (len / pieces > 1.0 + 1e-12) pieces *= 2;
    std::size_t span = b - a;
    if (pieces > span) {
        pieces = span;
        rep.flags.push_back("sampling coarser than unit subintervals");
    }

    double best = -1.0;
    std::vector<double> best_parts(nshell, 0.0);
    bool coarse = false;
    for (std::size_t p = 0; p < pieces; ++p) {
        std::size_t lo = a + span * p / pieces, hi = a + span * (p + 1) / pieces;
        if (hi - lo + 1 < 8) coarse = true;
        std::vector<double> parts(nshell);
        double total = 0.0;
        for (std::size_t n = 0; n < nshell; ++n) {
            std::vector<double> y(u.size(), 0.0);
            for (std::size_t i = lo; i <= hi; ++i) y[i] = dens[i][n];
            parts[n] = trapezoid(u.times, y, lo, hi);
            total += parts[n];
        }
        if (total > best) {
            best = total;
            best_parts = parts;
        }
    }
    if (coarse) rep.flags.push_back("fewer than 8 samples in a subinterval");
    rep.value = std::pow(std::max(best, 0.0), 0.25);
    for (std::size_t n = 0; n < nshell; ++n) rep.breakdown.emplace_back(1 << n, std::pow(std::max(best_parts[n], 0.0), 0.25));
    return rep;
}

NormReport z_norm(const Trajectory& u) { return z_norm(u, u.span()); }

double sup_h1(const Trajectory& u, Interval I) {
    auto [a, b] = sample_range(u, I);
    double m = 0.0;
    for (std::size_t i = a; i <= b; ++i) m = std::max(m, h1_norm(u.fields[i]));
    return m;
}

double zprime_norm(const Trajectory& u, Interval I) {
    double z = z_norm(u, I).value;
    return std::pow(z, 0.75) * std::pow(sup_h1(u, I), 0.25);
}

NormReport duhamel_norm(const Trajectory& h, Interval I) {
    h.validate();
    auto [a, b] = sample_range(h, I);
    NormReport rep;
    rep.name = "duhamel_h1_sup";
    rep.interval = I;
    if (b - a + 1 < 8) rep.flags.push_back("fewer than 8 samples");
    const GridSpec& spec = h.spec;
    rvec w = one_plus_k2(spec);
    double vol = spec.volume();

    auto pulled = [&](std::size_t i) {
        Spectrum s = spectral::propagate(forward_fourier(h.fields[i]), -h.times[i]);
        return s.coeffs();
    };
    cvec acc(spec.size());
    cvec prev = pulled(a);
    double best = 0.0;
    for (std::size_t i = a + 1; i <= b; ++i) {
        cvec cur = pulled(i);
        double half = 0.5 * (h.times[i] - h.times[i - 1]);
        K().axpy(cplx(half, 0.0), prev.data(), acc.data(), acc.size());
        K().axpy(cplx(half, 0.0), cur.data(), acc.data(), acc.size());
        best = std::max(best, std::sqrt(K().weighted_abs2(acc.data(), w.data(), acc.size()) / vol));
        prev = std::move(cur);
    }
    rep.value = best;
    return rep;
}

double sup_scaled_shell(const Field& f) {
    Spectrum s = forward_fourier(f);
    double best = 0.0;
    for (int N = 1; N <= spectral::top_dyadic(f.spec()); N *= 2) {
        Field p = inverse_fourier(spectral::multiply(s, spectral::shell_multiplier(f.spec(), N)));
        best = std::max(best, std::sqrt(K().max_abs2(p.values().data(), p.size())) / N);
    }
    return best;
}

double refined_sobolev_check(const Field& f) {
    double l4 = lp_norm(f, 4.0);
    require(l4 > 0.0, ErrorKind::OutOfRange, "refined Sobolev ratio undefined for the zero field");
    return l4 / std::sqrt(sup_scaled_shell(f) * h1_norm(f));
}

}  // namespace spnls::norms
