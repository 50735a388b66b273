#include <cmath>

#include "common.hpp"
#include "spnls/norms.hpp"
#include "spnls/rescale.hpp"
#include "spnls/strichartz.hpp"

namespace spnls::cli {

namespace {

using csv::num;
namespace st = strichartz;

st::ScanOptions scan_options(RunConfig& cfg, double t_lo, double t_hi, int samples) {
    st::ScanOptions o;
    o.L1 = static_cast<int>(cfg.integer("L1", 1));
    o.time_samples = static_cast<int>(cfg.integer("time_samples", samples));
    o.t_lo = cfg.real("t_lo", t_lo);
    o.t_hi = cfg.real("t_hi", t_hi);
    o.seed = cfg.seed();
    require_config(o.L1 >= 1 && (o.L1 & (o.L1 - 1)) == 0, "L1 must be a power of two");
    require_config(o.time_samples >= 2 && o.t_hi > o.t_lo, "need time_samples >= 2 and t_hi > t_lo");
    return o;
}

void check_dyadic(const std::vector<int>& Ns, const std::string& key) {
    require_config(!Ns.empty(), key + " must not be empty");
    for (int N : Ns)
        require_config(N >= 1 && (N & (N - 1)) == 0, key + " must hold powers of two");
}

std::string grid_plan(const std::vector<int>& Ns, int L1) {
    std::string s = "per-N grids (Nyquist 2N):";
    for (int N : Ns) {
        GridSpec g = st::scan_grid(N, L1);
        s += " N=" + std::to_string(N) + ":" + std::to_string(g.n1) + "x" + std::to_string(g.nper) + "^3";
    }
    return s;
}

csv::Table summary(const st::ScalingReport& r) {
    csv::Table t({"name", "p", "predicted_exponent", "slope", "intercept", "fit_residual", "max_constant",
                  "constant_spread", "ensemble", "flags"});
    t.add({r.name, num(r.p), num(r.predicted_exponent), num(r.fit.slope), num(r.fit.intercept), num(r.fit.residual),
           num(r.max_over_grid()), num(r.constant_spread()), num(r.ensemble), join_flags(r.flags)});
    return t;
}

void emit(Context& ctx, const st::ScalingReport& r, const std::string& ylabel) {
    ctx.write("scan.csv", r.csv());
    ctx.write("summary.csv", summary(r));
    ctx.plot("scan.svg", {r.name, "N", ylabel, true, true},
             {{"max raw", r.Ns, r.max_raw}, {"max constant", r.Ns, r.max_constant}});
}

void cmd_strichartz(Context& ctx) {
    auto& cfg = ctx.config();
    double p = cfg.real("p", 4.0);
    auto Ns = cfg.ints("N", {2, 4, 8});
    int ens = static_cast<int>(cfg.integer("ensemble", 64));
    auto o = scan_options(cfg, -1.0, 1.0, 128);
    check_dyadic(Ns, "N");
    require_config(p >= 2.0 && ens >= 1, "need p >= 2 and ensemble >= 1");
    if (!ctx.begin({grid_plan(Ns, o.L1), std::to_string(ens) + " draws per N"})) return;
    emit(ctx, st::strichartz_scan(p, Ns, ens, o), "L^p norm");
}

void cmd_dispersive(Context& ctx) {
    auto& cfg = ctx.config();
    auto Ns = cfg.ints("N", {4, 8});
    int family = static_cast<int>(cfg.integer("draws", 8));
    int ts = static_cast<int>(cfg.integer("t_samples", 64));
    auto o = scan_options(cfg, 0.01, 1.0, 128);
    check_dyadic(Ns, "N");
    require_config(o.t_lo > 0.0 && family >= 1 && ts >= 2, "need 0 < t_lo, draws >= 1 and t_samples >= 2");
    if (!ctx.begin({grid_plan(Ns, o.L1), std::to_string(ts) + " log-spaced times in [" + num(o.t_lo) + ", " + num(o.t_hi) + "]"}))
        return;
    emit(ctx, st::dispersive_scan(Ns, o.t_lo, o.t_hi, family, ts, o), "sup |e^{itD} P_N f| |t|^1/2");
}

void cmd_bilinear(Context& ctx) {
    auto& cfg = ctx.config();
    auto Ns = cfg.ints("N", {2, 4, 8});
    int ens = static_cast<int>(cfg.integer("ensemble", 8));
    auto o = scan_options(cfg, 0.0, 1.0, 64);
    check_dyadic(Ns, "N");
    require_config(ens >= 1, "ensemble must be positive");
    if (!ctx.begin({grid_plan(Ns, o.L1), std::to_string(ens) + " draws per pair"})) return;
    auto r = st::bilinear_scan(Ns, ens, o);
    ctx.write("bilinear.csv", r.csv());
    csv::Table sum({"kappa", "slope", "intercept", "fit_residual", "ensemble", "flags"});
    sum.add({num(r.kappa), num(r.fit.slope), num(r.fit.intercept), num(r.fit.residual), num(r.ensemble),
             join_flags(r.flags)});
    ctx.write("summary.csv", sum);
    Series s{"ratio", {}, {}};
    for (const auto& pt : r.points) {
        s.x.push_back(pt.gain);
        s.y.push_back(pt.ratio);
    }
    ctx.plot("bilinear.svg", {"Bilinear ratio against gain", "N2/N1 + 1/N2", "ratio", true, true}, {s});
}

void cmd_smoothing(Context& ctx) {
    auto& cfg = ctx.config();
    double delta = cfg.real("delta", 0.25);
    auto Ks = cfg.ints("K", {2, 4, 8});
    int ens = static_cast<int>(cfg.integer("ensemble", 16));
    auto o = scan_options(cfg, -1.0, 1.0, 128);
    check_dyadic(Ks, "K");
    require_config(delta > 0.0 && ens >= 1, "need delta > 0 and ensemble >= 1");
    if (!ctx.begin({grid_plan(Ks, o.L1), std::to_string(ens) + " draws per K, delta " + num(delta)})) return;
    emit(ctx, st::local_smoothing_scan(delta, Ks, ens, o), "smoothing ratio");
}

void cmd_extinction(Context& ctx) {
    auto& cfg = ctx.config();
    GridSpec torus = cfg.grid(GridSpec{1, 32, 32});
    EuclidSpec box = box_from(cfg, "box", EuclidSpec{kTwoPi, 16});
    double N = cfg.real("N", 8.0), amp = cfg.real("amp", 1.0);
    auto T1s = cfg.reals("T1", {1.0, 4.0, 16.0});
    int samples = static_cast<int>(cfg.integer("samples", 12));
    require_config(N >= 1.0 && amp > 0.0 && samples >= 2 && !T1s.empty(), "need N >= 1, amp > 0, samples >= 2 and T1");
    for (double T : T1s) require_config(T > 0.0, "T1 must be positive");
    if (!ctx.begin({describe(torus), describe(box), std::to_string(T1s.size()) + " core sizes"})) return;
    EuclidField psi = ensemble::band_bump(box, amp);
    csv::Table t({"T1", "core", "z_outside", "flags"});
    csv::Table sh({"T1", "M", "l6_outside"});
    std::vector<Series> plots;
    for (double T : T1s) {
        auto r = st::extinction_check(psi, N, T, torus, samples);
        t.add({num(T), num(r.core), num(r.z_outside), join_flags(r.flags)});
        Series s{"T1=" + num(T), {}, {}};
        for (const auto& [M, v] : r.shell_l6) {
            sh.add({num(T), num(M), num(v)});
            s.x.push_back(M);
            s.y.push_back(v);
        }
        plots.push_back(s);
    }
    ctx.write("extinction.csv", t);
    ctx.write("shells.csv", sh);
    ctx.plot("shells.svg", {"Shell L6 norms outside the core", "M", "L6", true, true}, plots);
}

void cmd_sobolev(Context& ctx) {
    auto& cfg = ctx.config();
    GridSpec g = cfg.grid();
    int count = static_cast<int>(cfg.integer("count", 100));
    double sigma = cfg.real("sigma", 3.0);
    double re = cfg.real("scale_re", 2.5), im = cfg.real("scale_im", -1.5);
    EuclidSpec box = box_from(cfg, "box", EuclidSpec{6.0, 32});
    double radius = cfg.real("radius", 1.2);
    std::uint64_t seed = cfg.seed();
    require_config(count >= 3 && sigma > 0.0 && radius > 0.0, "need count >= 3, sigma > 0, radius > 0");
    require_config(cplx(re, im) != cplx(0.0), "scale must be non-zero");
    int topN = 1;
    while (2 * topN <= half_nyquist(g) && 2.0 * std::sqrt(2.0 * topN) <= box.side) topN *= 2;
    if (!ctx.begin({describe(g), std::to_string(count) + " fields: random, plane waves, bubbles with N <= " +
                                     std::to_string(topN)}))
        return;
    auto rng = ensemble::make_rng(seed, {0x50b});
    int kmax = static_cast<int>(half_nyquist(g));
    std::uniform_int_distribution<int> kd(-kmax, kmax);
    EuclidField phi = ensemble::radial_bump(box, radius);
    csv::Table t({"index", "kind", "detail", "ratio", "scaled_ratio", "relative_change"});
    double worst = 0.0, worst_change = 0.0;
    for (int i = 0; i < count; ++i) {
        Field f;
        std::string kind, detail;
        if (i % 3 == 0) {
            kind = "random";
            f = ensemble::smooth_random(g, seed + i, sigma);
            detail = "seed " + std::to_string(seed + i);
        } else if (i % 3 == 1) {
            kind = "plane";
            std::array<int, 4> k{};
            do {
                for (int a = 0; a < 4; ++a) k[a] = kd(rng);
                k[0] *= g.L1;
            } while (k[1] == 0 && k[2] == 0 && k[3] == 0 && k[0] == 0);
            f = ensemble::plane_wave(g, 1.0, k);
            detail = std::to_string(k[0]) + " " + std::to_string(k[1]) + " " + std::to_string(k[2]) + " " +
                     std::to_string(k[3]);
        } else {
            kind = "bubble";
            int N = 1 << ((i / 3) % (static_cast<int>(std::log2(topN)) + 1));
            f = profiles::rescale_TN(phi, N, g);
            detail = "N " + std::to_string(N);
        }
        double r = norms::refined_sobolev_check(f);
        cvec v = f.values();
        for (auto& z : v) z *= cplx(re, im);
        double rs = norms::refined_sobolev_check(Field(g, v));
        double change = std::fabs(rs - r) / r;
        worst = std::max(worst, r);
        worst_change = std::max(worst_change, change);
        t.add({num(i), kind, detail, num(r), num(rs), num(change)});
    }
    csv::Table sum({"count", "max_ratio", "max_relative_change"});
    sum.add({num(count), num(worst), num(worst_change)});
    ctx.write("sobolev.csv", t);
    ctx.write("summary.csv", sum);
}

}  // namespace

void register_scans(std::vector<Command>& out) {
    const std::string scaling = "  scan.csv: p,N,draw,raw,constant rows then a summary row\n"
                                "  summary.csv: name,p,predicted_exponent,slope,intercept,fit_residual,max_constant,"
                                "constant_spread,ensemble,flags";
    out.push_back({"strichartz-scan", "Max L^p Strichartz constants over N", scaling, cmd_strichartz});
    out.push_back({"dispersive-scan", "Dispersive decay constants over N", scaling, cmd_dispersive});
    out.push_back({"bilinear-scan", "Bilinear interaction ratios over frequency pairs",
                   "  bilinear.csv: N1,N2,gain,product,ratio\n"
                   "  summary.csv: kappa,slope,intercept,fit_residual,ensemble,flags",
                   cmd_bilinear});
    out.push_back({"smoothing-check", "Local smoothing ratios over K", scaling, cmd_smoothing});
    out.push_back({"extinction", "Z-norm of a rescaled free wave outside its core",
                   "  extinction.csv: T1,core,z_outside,flags\n  shells.csv: T1,M,l6_outside", cmd_extinction});
    out.push_back({"sobolev-check", "Refined Sobolev ratio over a mixed ensemble",
                   "  sobolev.csv: index,kind,detail,ratio,scaled_ratio,relative_change\n"
                   "  summary.csv: count,max_ratio,max_relative_change",
                   cmd_sobolev});
}

}  // namespace spnls::cli
