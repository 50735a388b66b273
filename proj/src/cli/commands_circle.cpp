#include <cmath>
#include <numeric>

#include "common.hpp"
#include "spnls/circle.hpp"
#include "spnls/numtheory.hpp"

namespace spnls::cli {

namespace {

using csv::num;
namespace cc = circle;

void cmd_weyl(Context& ctx) {
    auto& cfg = ctx.config();
    auto Ns = cfg.ints("N", {16, 32, 64});
    int ts = static_cast<int>(cfg.integer("t_samples", 256));
    require_config(!Ns.empty() && ts >= 1, "need N values and t_samples >= 1");
    for (int N : Ns) require_config(N >= 1, "N must be positive");
    if (!ctx.begin({std::to_string(Ns.size()) + " values of N, " + std::to_string(ts) + " times in (0, " +
                    num(cc::kernel_window()) + ")"}))
        return;
    auto times = cc::weyl_times(ts);
    csv::Table sum({"N", "max_ratio", "t", "a", "q"});
    Series s{"max ratio", {}, {}};
    double lo = INFINITY, hi = 0.0;
    for (int N : Ns) {
        auto r = cc::weyl_bound_check(N, times);
        ctx.write("weyl_N" + std::to_string(N) + ".csv", r.csv());
        const auto& row = r.rows[r.argmax];
        sum.add({num(N), num(r.max_ratio), num(row.t), num(row.approx.a), num(row.approx.q)});
        lo = std::min(lo, r.max_ratio);
        hi = std::max(hi, r.max_ratio);
        s.x.push_back(N);
        s.y.push_back(r.max_ratio);
    }
    csv::Table spread({"ratio_spread"});
    spread.add({num(hi / lo)});
    ctx.write("summary.csv", sum);
    ctx.write("spread.csv", spread);
    ctx.plot("weyl.svg", {"Normalized Weyl sum maxima", "N", "max ratio", true, false}, {s});
}

void cmd_farey(Context& ctx) {
    auto& cfg = ctx.config();
    long long Q = cfg.integer("Q", 8), M = cfg.integer("M", 64);
    std::vector<long long> all(std::max(0LL, Q));
    std::iota(all.begin(), all.end(), 1LL);
    auto S = cfg.longs("S", all);
    int tp = static_cast<int>(cfg.integer("t_points", 4096));
    long long mc = cfg.integer("m_check", 1000);
    require_config(Q >= 1 && M >= 8 * Q, "need Q >= 1 and M >= 8Q");
    require_config(tp >= 16 && (tp & (tp - 1)) == 0, "t_points must be a power of two >= 16");
    require_config(mc >= 0, "m_check must be non-negative");
    for (long long q : S) require_config(q >= 1 && q <= Q, "S must be a subset of 1..Q");
    if (!ctx.begin({"S of size " + std::to_string(S.size()) + ", M=" + num(M) + ", Q=" + num(Q) + ", " +
                    std::to_string(tp) + " t points, |m| <= " + num(mc)}))
        return;
    auto r = cc::farey_identity_check(S, M, Q, tp, mc);
    ctx.write("farey.csv", r.csv());
    csv::Table co({"m", "re", "im", "exact", "bound"});
    for (long long m = -mc; m <= mc; ++m) {
        cplx c = cc::farey_coefficient(S, m);
        co.add({num(m), num(c.real()), num(c.imag()), num(cc::farey_coefficient_exact(S, m)), num(r.cm_bound)});
    }
    ctx.write("coefficients.csv", co);
}

void cmd_divisors(Context& ctx) {
    auto& cfg = ctx.config();
    long long Q = cfg.integer("Q", 128), mabs = cfg.integer("m_abs", 10000);
    double gamma = cfg.real("gamma", 0.25);
    long long P = cfg.integer("level_P", 10000), D = cfg.integer("level_D", 4);
    double B = cfg.real("level_B", 2.0);
    require_config(Q >= 1 && mabs >= 0 && gamma > 0.0, "need Q >= 1, m_abs >= 0 and gamma > 0");
    require_config(P >= 0 && D >= 1 && B > 0.0, "need level_P >= 0, level_D >= 1 and level_B > 0");
    if (!ctx.begin({"Q=" + num(Q) + ", exhaustive |m| <= " + num(mabs) + ", level set up to P=" + num(P)})) return;
    auto r = cc::ramanujan_bound_check(Q, mabs, gamma);
    ctx.write("ramanujan.csv", r.csv());
    csv::Table sum({"Q", "gamma", "m_abs", "max_ratio", "argmax_m"});
    sum.add({num(Q), num(gamma), num(mabs), num(r.max_ratio), num(r.argmax_m)});
    ctx.write("summary.csv", sum);
    ctx.write("level_set.csv", cc::divisor_level_set_check(P, Q, D, gamma, B).csv());
}

void cmd_kernel(Context& ctx) {
    auto& cfg = ctx.config();
    int N = static_cast<int>(cfg.integer("N", 64));
    double p0 = cfg.real("p0", 3.7);
    require_config(N >= 32 && (N & (N - 1)) == 0, "N must be a power of two >= 32");
    require_config(p0 > 18.0 / 5.0 && p0 < 4.0, "p0 must lie in (18/5, 4)");
    auto win = cc::lambda_window(N, p0);
    double lambda = cfg.real("lambda", std::sqrt(win[0] * win[1]));
    cc::DecompOptions o;
    o.guard = static_cast<int>(cfg.integer("guard", o.guard));
    o.b = static_cast<int>(cfg.integer("b", o.b));
    o.r = cfg.real("r", o.r);
    o.samples = static_cast<int>(cfg.integer("samples", o.samples));
    o.unity_points = static_cast<int>(cfg.integer("unity_points", o.unity_points));
    o.fourier_points = static_cast<int>(cfg.integer("fourier_points", o.fourier_points));
    o.seed = cfg.seed();
    require_config(lambda >= win[0] && lambda <= win[1],
                   "lambda must lie in the window [" + num(win[0]) + ", " + num(win[1]) + "]");
    auto kl = cc::decomposition_KL(N, lambda, p0);
    if (!ctx.begin({"N=" + num(N) + " p0=" + num(p0) + " lambda=" + num(lambda) + " K=" + num(kl[0]) + " L=" + num(kl[1]),
                    std::to_string(o.samples) + " kernel samples"}))
        return;
    auto d = cc::kernel_decomposition(N, lambda, p0, o);
    ctx.write("summary.csv", d.csv());
    ctx.write("samples.csv", d.samples_csv());
}

void cmd_distr(Context& ctx) {
    auto& cfg = ctx.config();
    auto Ns = cfg.ints("N", {8, 16});
    double p0 = cfg.real("p0", 3.7);
    int draws = static_cast<int>(cfg.integer("draws", 32));
    int nl = static_cast<int>(cfg.integer("lambdas", 8));
    cc::DistrOptions o;
    o.oversample = static_cast<int>(cfg.integer("oversample", o.oversample));
    o.t_samples = static_cast<int>(cfg.integer("t_samples", o.t_samples));
    o.L1 = static_cast<int>(cfg.integer("L1", o.L1));
    o.seed = cfg.seed();
    require_config(!Ns.empty() && draws >= 1 && nl >= 1, "need N values, draws >= 1 and lambdas >= 1");
    require_config(p0 > 18.0 / 5.0 && p0 < 4.0, "p0 must lie in (18/5, 4)");
    for (int N : Ns) require_config(N >= 2 && (N & (N - 1)) == 0, "N must hold powers of two >= 2");
    std::string grids;
    for (int N : Ns) grids += " N=" + num(N) + ":nper=" + num(2 * N * o.oversample);
    if (!ctx.begin({"grids" + grids, std::to_string(draws) + " draws, " + std::to_string(nl) + " lambdas"})) return;
    csv::Table sum({"N", "overall_max", "field_max", "monotone", "flags"});
    std::vector<Series> plots;
    double lo = INFINITY, hi = 0.0;
    for (int N : Ns) {
        auto r = cc::distributional_check(N, cc::distributional_lambdas(N, p0, nl), p0, draws, o);
        ctx.write("distr_N" + std::to_string(N) + ".csv", r.csv());
        sum.add({num(N), num(r.overall_max), num(r.field_max), r.monotone ? "true" : "false", join_flags(r.flags)});
        lo = std::min(lo, r.overall_max);
        hi = std::max(hi, r.overall_max);
        plots.push_back({"N=" + num(N), r.lambdas, r.max_constant});
    }
    csv::Table spread({"constant_spread"});
    spread.add({num(hi / lo)});
    ctx.write("summary.csv", sum);
    ctx.write("spread.csv", spread);
    ctx.plot("distr.svg", {"Implied distributional constants", "lambda", "max constant", true, true}, plots);
}

}  // namespace

void register_circle(std::vector<Command>& out) {
    out.push_back({"weyl", "Normalized Weyl sum bound over N",
                   "  weyl_N<N>.csv: N,t,a,q,beta,max_abs,ratio\n  summary.csv: N,max_ratio,t,a,q\n"
                   "  spread.csv: ratio_spread",
                   cmd_weyl});
    out.push_back({"farey-coeffs", "Farey bump identity and coefficient bound",
                   "  farey.csv: Q,M,t_points,m_max,tail_estimate,max_error,max_lhs,m_check,max_abs_cm,cm_bound,"
                   "max_cross_diff\n  coefficients.csv: m,re,im,exact,bound",
                   cmd_farey});
    out.push_back({"divisors", "Ramanujan sum / divisor bound, exhaustive in m",
                   "  ramanujan.csv: m,lhs,d,ratio\n  summary.csv: Q,gamma,m_abs,max_ratio,argmax_m\n"
                   "  level_set.csv: P,Q,D,gamma,B,count,shape,implied_C",
                   cmd_divisors});
    out.push_back({"kernel-decomp", "Three-piece kernel decomposition at one lambda",
                   "  summary.csv: N,lambda,p0,K,L,case,guard,b,r,samples,max_abs_k,sum_identity_error,unity_error,"
                   "e_min,sup_k1,sup_k1_over_lambda2,fourier_k2,fourier_k2_shape,fourier_k3,fourier_k3_shape,"
                   "quadrature_ok\n  samples.csv: x1,x2,x3,x4,t,abs_k,abs_k1,abs_k2,abs_k3",
                   cmd_kernel});
    out.push_back({"distr-check", "Superlevel set measures against the distributional bound",
                   "  distr_N<N>.csv: N,draw,lambda,measure,band,constant\n"
                   "  summary.csv: N,overall_max,field_max,monotone,flags\n  spread.csv: constant_spread",
                   cmd_distr});
}

}  // namespace spnls::cli
