#include "spnls/circle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "spnls/csv.hpp"
#include "spnls/error.hpp"
#include "spnls/fft.hpp"
#include "spnls/parallel.hpp"
#include "spnls/spectral.hpp"

namespace spnls::circle {
namespace {

constexpr int kGL = 20;

struct Rule {
    std::array<double, kGL> x{}, w{};
};

// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration.
const Rule& gauss_legendre() {
    static const Rule rule = [] {
        Rule r;
        for (int i = 0; i < kGL; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (kGL + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= kGL; ++k) {
                    double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = kGL * (z * p1 - p0) / (z * z - 1.0);
                double dz = p1 / dp;
                z -= dz;
                if (std::fabs(dz) < 1e-16) break;
            }
            r.x[i] = z;
            r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        return r;
    }();
    return rule;
}

template <class F>
cplx gl_panel(const F& f, double a, double b) {
    const Rule& r = gauss_legendre();
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx s = 0.0;
    for (int i = 0; i < kGL; ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

template <class F>
cplx adaptive(const F& f, double a, double b, cplx whole, double tol, int depth, bool& ok) {
    double m = 0.5 * (a + b);
    cplx left = gl_panel(f, a, m), right = gl_panel(f, m, b);
    if (std::abs(left + right - whole) <= tol) return left + right;
    if (depth == 0) {
        ok = false;
        return left + right;
    }
    return adaptive(f, a, m, left, 0.5 * tol, depth - 1, ok) + adaptive(f, m, b, right, 0.5 * tol, depth - 1, ok);
}

double eta1_sq(double y) {
    double e = spectral::eta1(y);
    return e * e;
}

// Phase of e^{−2πi·num/den} with the numerator reduced exactly.
cplx root_of_unity(long long num, long long den) {
    long long r = num % den;
    if (r < 0) r += den;
    double a = -kTwoPi * static_cast<double>(r) / static_cast<double>(den);
    return {std::cos(a), std::sin(a)};
}

void check_S(const std::vector<long long>& S, long long Q) {
    require(!S.empty(), ErrorKind::OutOfRange, "S must be nonempty");
    for (long long q : S) require(q >= 1 && q <= Q, ErrorKind::OutOfRange, "S must lie in {1..Q}");
}

}  // namespace

cplx weyl_sum(double x, double t, int N) {
    require(N >= 1, ErrorKind::OutOfRange, "weyl_sum needs N >= 1");
    double tau = std::remainder(t, kTwoPi), xr = std::remainder(x, kTwoPi);
    cplx s = eta1_sq(0.0);
    for (int n = 1; n <= 2 * N; ++n) {
        double w = eta1_sq(static_cast<double>(n) / N);
        if (w == 0.0) continue;
        double ph = -tau * double(n) * double(n);
        s += 2.0 * w * std::cos(xr * n) * cplx(std::cos(ph), std::sin(ph));
    }
    return s;
}

cplx line_integral(double x1, double t, int N, bool* converged) {
    require(N >= 1, ErrorKind::OutOfRange, "line_integral needs N >= 1");
    auto f = [&](double xi) {
        double w = eta1_sq(xi / N);
        double ph = -t * xi * xi + x1 * xi;
        return w * cplx(std::cos(ph), std::sin(ph));
    };
    double lo = -2.0 * N, hi = 2.0 * N;
    std::vector<double> br{lo, -double(N), double(N), hi};
    if (t != 0.0) {
        double xs = x1 / (2.0 * t);
        if (xs > lo && xs < hi) br.push_back(xs);
    }
    std::sort(br.begin(), br.end());
    double omega = 2.0 * std::fabs(t) * hi + std::fabs(x1);
    double step = omega > 0.0 ? 3.0 * kTwoPi / omega : hi - lo;
    // Relative target 1e−12 of the trivial bound 4N, floored at the rounding level of the phase.
    double phase = std::fabs(t) * hi * hi + std::fabs(x1) * hi;
    double tol = std::max(4e-12 * N, 1e-14 * (1.0 + phase) * (hi - lo));
    bool ok = true;
    cplx total = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        double a = br[i], b = br[i + 1];
        if (b - a <= 0.0) continue;
        int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
        for (int p = 0; p < pieces; ++p) {
            double pa = a + (b - a) * p / pieces, pb = a + (b - a) * (p + 1) / pieces;
            total += adaptive(f, pa, pb, gl_panel(f, pa, pb), tol * (pb - pa) / (hi - lo), 16, ok);
        }
    }
    if (converged) *converged = ok;
    return total;
}

double eta1_hat(double omega) {
    // η¹ = 1 on [−1,1]; the transition on 1 < |s| < 2 uses fixed panels fine enough for |ω| ≤ 1000.
    static const int base = 256;
    static const std::vector<std::array<double, 2>> nodes = [] {
        const Rule& r = gauss_legendre();
        std::vector<std::array<double, 2>> v;
        for (int p = 0; p < base; ++p) {
            double a = 1.0 + double(p) / base, h = 0.5 / base;
            for (int i = 0; i < kGL; ++i) {
                double s = a + h + h * r.x[i];
                v.push_back({s, r.w[i] * h * spectral::eta1(s)});
            }
        }
        return v;
    }();
    double w = std::fabs(omega);
    double core = w < 1e-8 ? 2.0 - w * w / 3.0 : 2.0 * std::sin(w) / w;
    double tr = 0.0;
    if (w <= 1000.0) {
        for (const auto& n : nodes) tr += n[1] * std::cos(w * n[0]);
    } else {
        int panels = static_cast<int>(std::ceil(w / 4.0));
        const Rule& r = gauss_legendre();
        for (int p = 0; p < panels; ++p) {
            double a = 1.0 + double(p) / panels, h = 0.5 / panels;
            for (int i = 0; i < kGL; ++i) {
                double s = a + h + h * r.x[i];
                tr += r.w[i] * h * spectral::eta1(s) * std::cos(w * s);
            }
        }
    }
    return core + 2.0 * tr;
}

double kernel_window() { return kTwoPi / 16.0; }

cplx KernelFactors::value() const { return window * periodic[0] * periodic[1] * periodic[2] * line; }

KernelFactors kernel_factors(const std::array<double, 4>& x, double t, int N) {
    KernelFactors k;
    k.window = spectral::eta1(32.0 * t / kTwoPi);
    if (k.window == 0.0) return k;
    for (int j = 0; j < 3; ++j) k.periodic[j] = weyl_sum(x[j + 1], t, N);
    k.line = line_integral(x[0], t, N, &k.converged);
    return k;
}

cplx kernel_KN(const std::array<double, 4>& x, double t, int N) { return kernel_factors(x, t, N).value(); }

Field kernel_field(const GridSpec& spec, double t, int N) {
    spec.validate();
    double w = spectral::eta1(32.0 * t / kTwoPi);
    Field f = Field::zeros(spec);
    if (w == 0.0) return f;
    std::vector<cplx> line(spec.n1), per(spec.nper);
    bool ok = true;
    for (int i = 0; i < spec.n1; ++i) {
        bool c = true;
        line[i] = line_integral(spec.coord(0, i), t, N, &c);
        ok = ok && c;
    }
    require(ok, ErrorKind::NumericalAbort, "line quadrature did not converge");
    for (int i = 0; i < spec.nper; ++i) per[i] = weyl_sum(spec.coord(1, i), t, N);
    cvec& v = f.values();
    std::size_t idx = 0;
    for (int i1 = 0; i1 < spec.n1; ++i1)
        for (int i2 = 0; i2 < spec.nper; ++i2)
            for (int i3 = 0; i3 < spec.nper; ++i3) {
                cplx a = w * line[i1] * per[i2] * per[i3];
                for (int i4 = 0; i4 < spec.nper; ++i4) v[idx++] = a * per[i4];
            }
    return f;
}

std::string WeylReport::csv() const {
    csv::Table tb({"N", "t", "a", "q", "beta", "max_abs", "ratio"});
    for (const auto& r : rows)
        tb.add({csv::num(N), csv::num(r.t), csv::num(r.approx.a), csv::num(r.approx.q), csv::num(r.approx.beta),
                csv::num(r.max_abs), csv::num(r.ratio)});
    return tb.str() + "# summary,max_ratio=" + csv::num(max_ratio) + "\n";
}

std::vector<double> weyl_times(int n) {
    require(n >= 1, ErrorKind::OutOfRange, "need at least one t sample");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = kernel_window() * (i + 0.5) / n;
    return t;
}

WeylReport weyl_bound_check(int N, const std::vector<double>& times) {
    require(N >= 1, ErrorKind::OutOfRange, "weyl_bound_check needs N >= 1");
    WeylReport rep;
    rep.N = N;
    rep.rows.resize(times.size());
    int P = 8 * N;
    std::vector<double> w(2 * N + 1);
    for (int n = 0; n <= 2 * N; ++n) w[n] = eta1_sq(static_cast<double>(n) / N);
    parallel_for(times.size(), [&](std::size_t i) {
        double t = times[i];
        double tau = std::remainder(t, kTwoPi);
        cvec c(P, cplx(0.0));
        for (int n = -2 * N; n <= 2 * N; ++n) {
            double ph = -tau * double(n) * double(n);
            c[(n + P) % P] += w[std::abs(n)] * cplx(std::cos(ph), std::sin(ph));
        }
        int dims[1] = {P};
        fft::transform(c.data(), dims, fft::Direction::Backward);
        double m = 0.0;
        for (const cplx& z : c) m = std::max(m, std::abs(z));
        WeylRow row;
        row.t = t;
        row.approx = nt::dirichlet_approx(t, N);
        row.max_abs = m;
        row.ratio = m * std::sqrt(double(row.approx.q)) * (1.0 + N * std::sqrt(std::fabs(row.approx.beta))) / N;
        rep.rows[i] = row;
    });
    for (std::size_t i = 0; i < rep.rows.size(); ++i)
        if (rep.rows[i].ratio > rep.max_ratio) {
            rep.max_ratio = rep.rows[i].ratio;
            rep.argmax = i;
        }
    return rep;
}

cplx farey_coefficient(const std::vector<long long>& S, long long m) {
    cplx s = 0.0;
    for (long long q : S) {
        require(q >= 1, ErrorKind::OutOfRange, "q must be positive");
        for (long long a = 0; a < q; ++a)
            if (std::gcd(a, q) == 1) s += root_of_unity(nt::checked_mul(m % q, a), q);
    }
    return s;
}

long long farey_coefficient_exact(const std::vector<long long>& S, long long m) {
    long long s = 0;
    for (long long q : S) s = nt::checked_add(s, nt::ramanujan_sum(q, m));
    return s;
}

cplx farey_bump_coeffs(const std::vector<long long>& S, long long M, long long Q, long long m) {
    require(Q >= 1, ErrorKind::OutOfRange, "Q must be positive");
    require(M >= 8 * Q, ErrorKind::OutOfRange, "farey bumps need M >= 8Q");
    check_S(S, Q);
    return farey_coefficient(S, m);
}

std::string FareyReport::csv() const {
    csv::Table tb({"Q", "M", "t_points", "m_max", "tail_estimate", "max_error", "max_lhs", "m_check", "max_abs_cm",
                   "cm_bound", "max_cross_diff"});
    tb.add({csv::num(Q), csv::num(M), csv::num(t_points), csv::num(m_max), csv::num(tail_estimate),
            csv::num(max_error), csv::num(max_lhs), csv::num(m_check), csv::num(max_abs_cm), csv::num(cm_bound),
            csv::num(max_cross_diff)});
    return tb.str();
}

FareyReport farey_identity_check(const std::vector<long long>& S, long long M, long long Q, int t_points,
                                 long long m_check) {
    require(Q >= 1, ErrorKind::OutOfRange, "Q must be positive");
    require(M >= 8 * Q, ErrorKind::OutOfRange, "farey bumps need M >= 8Q");
    require(t_points >= 16 && is_pow2(t_points), ErrorKind::OutOfRange, "t_points must be a power of two >= 16");
    require(m_check >= 0, ErrorKind::OutOfRange, "m_check must be nonnegative");
    check_S(S, Q);
    FareyReport rep;
    rep.S = S;
    rep.M = M;
    rep.Q = Q;
    rep.t_points = t_points;
    rep.m_check = m_check;
    rep.cm_bound = 4.0 * double(Q) * double(Q);
    double MQ = double(nt::checked_mul(M, Q));

    std::vector<double> lhs(t_points, 0.0);
    for (int j = 0; j < t_points; ++j) {
        double t = double(j) / t_points;
        for (long long q : S) {
            long long a0 = static_cast<long long>(std::floor(q * (t - 2.0 / MQ)));
            long long a1 = static_cast<long long>(std::ceil(q * (t + 2.0 / MQ)));
            for (long long a = a0; a <= a1; ++a)
                if (std::gcd(a, q) == 1) lhs[j] += spectral::eta1(MQ * (t - double(a) / double(q)));
        }
        rep.max_lhs = std::max(rep.max_lhs, lhs[j]);
    }

    // Truncate once |η̂| stays below 1e−14 over a whole block (its quadrature noise floor is near 1e−16).
    const long long block = 256;
    std::vector<double> hat{eta1_hat(0.0)};
    auto extend = [&](long long upto) {
        while (static_cast<long long>(hat.size()) <= upto) hat.push_back(eta1_hat(kTwoPi * double(hat.size()) / MQ));
    };
    long long m_max = block;
    for (;; m_max += block) {
        extend(m_max);
        double worst = 0.0;
        for (long long m = m_max - block + 1; m <= m_max; ++m) worst = std::max(worst, std::fabs(hat[m]));
        if (worst < 1e-14 || m_max >= (1LL << 20)) break;
    }
    rep.m_max = m_max;
    extend(2 * m_max);
    for (long long m = m_max + 1; m <= 2 * m_max; ++m) rep.tail_estimate += 2.0 * rep.cm_bound / MQ * std::fabs(hat[m]);

    auto cross = [&](long long m, cplx c) {
        rep.max_abs_cm = std::max(rep.max_abs_cm, std::abs(c));
        rep.max_cross_diff = std::max(rep.max_cross_diff, std::abs(c - cplx(double(farey_coefficient_exact(S, m)))));
    };
    cvec bins(t_points, cplx(0.0));
    for (long long m = -m_max; m <= m_max; ++m) {
        cplx c = farey_coefficient(S, m);
        long long b = ((m % t_points) + t_points) % t_points;
        bins[b] += hat[std::llabs(m)] / MQ * c;
        if (std::llabs(m) <= m_check) cross(m, c);
    }
    for (long long m = m_max + 1; m <= m_check; ++m) {
        cross(m, farey_coefficient(S, m));
        cross(-m, farey_coefficient(S, -m));
    }
    int dims[1] = {t_points};
    fft::transform(bins.data(), dims, fft::Direction::Backward);
    for (int j = 0; j < t_points; ++j) rep.max_error = std::max(rep.max_error, std::abs(bins[j] - lhs[j]));
    return rep;
}

std::string RamanujanReport::csv() const {
    csv::Table tb({"m", "lhs", "d", "ratio"});
    for (const auto& r : rows) tb.add({csv::num(r.m), csv::num(r.lhs), csv::num(r.d), csv::num(r.ratio)});
    return tb.str() + "# summary,Q=" + csv::num(Q) + ",gamma=" + csv::num(gamma) + ",max_ratio=" + csv::num(max_ratio) +
           ",argmax_m=" + csv::num(argmax_m) + "\n";
}

RamanujanReport ramanujan_bound_check(long long Q, long long m_abs, double gamma) {
    require(Q >= 1, ErrorKind::OutOfRange, "Q must be positive");
    require(m_abs >= 0, ErrorKind::OutOfRange, "m range must be nonnegative");
    require(gamma > 0.0, ErrorKind::OutOfRange, "gamma must be positive");
    RamanujanReport rep;
    rep.Q = Q;
    rep.gamma = gamma;
    rep.rows.resize(static_cast<std::size_t>(2 * m_abs + 1));
    double scale = std::pow(double(Q), 1.0 + gamma);
    parallel_for(rep.rows.size(), [&](std::size_t i) {
        long long m = static_cast<long long>(i) - m_abs;
        RamanujanRow r;
        r.m = m;
        for (long long q = 1; q <= Q; ++q) r.lhs = nt::checked_add(r.lhs, std::llabs(nt::ramanujan_sum(q, m)));
        r.d = nt::divisor_count(m, Q);
        r.ratio = double(r.lhs) / (double(r.d) * scale);
        rep.rows[i] = r;
    });
    for (const auto& r : rep.rows)
        if (r.ratio > rep.max_ratio) {
            rep.max_ratio = r.ratio;
            rep.argmax_m = r.m;
        }
    return rep;
}

std::string LevelSetReport::csv() const {
    csv::Table tb({"P", "Q", "D", "gamma", "B", "count", "shape", "implied_C"});
    tb.add({csv::num(P), csv::num(Q), csv::num(D), csv::num(gamma), csv::num(B), csv::num(count), csv::num(shape),
            csv::num(implied_C)});
    return tb.str();
}

LevelSetReport divisor_level_set_check(long long P, long long Q, long long D, double gamma, double B) {
    require(P >= 1 && Q >= 1 && D >= 1, ErrorKind::OutOfRange, "P, Q, D must be positive");
    require(gamma > 0.0 && B > 0.0, ErrorKind::OutOfRange, "gamma and B must be positive");
    LevelSetReport rep{P, Q, D, gamma, B};
    std::vector<long long> d = nt::divisor_counts(P, Q);
    rep.count = std::count_if(d.begin(), d.end(), [&](long long v) { return v >= D; });
    rep.shape = std::pow(double(D), -B) * std::pow(double(Q), gamma) * double(P) + std::pow(double(Q), B);
    rep.implied_C = double(rep.count) / rep.shape;
    return rep;
}

}  // namespace spnls::circle
