#include <cmath>

#include "common.hpp"
#include "spnls/norms.hpp"
#include "spnls/solver.hpp"
#include "spnls/strichartz.hpp"

namespace spnls::cli {

namespace {

using csv::num;

void trajectory_table(const Trajectory& u, csv::Table& t, const std::string& tag) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto me = norms::mass_energy(u.fields[i]);
        t.add({tag, num(u.times[i]), num(me.mass), num(me.energy), num(norms::h1_norm(u.fields[i]))});
    }
}

void cmd_evolve(Context& ctx) {
    auto& cfg = ctx.config();
    GridSpec g = cfg.grid();
    solver::SolveConfig sc = cfg.solve();
    double T = cfg.real("T", 1.0);
    require_config(T >= 0.0, "T must be non-negative");
    DataSpec ds = data_spec(cfg, "plane", 1.0);
    if (!ctx.begin({describe(g), "steps " + std::to_string(static_cast<long long>(std::ceil(T / sc.dt))) + " of dt " +
                                     num(sc.dt) + " to T = " + num(T),
                    "data " + ds.kind}))
        return;
    Field u0 = make_data(ds, g);
    Trajectory u = sc.scheme == solver::Scheme::Picard ? solver::picard_solve(u0, {0.0, T}, sc).trajectory
                                                       : solver::evolve(u0, T, sc);
    csv::Table tr({"t", "mass", "energy", "h1", "plane_error"});
    double k2 = 0.0;
    if (ds.kind == "plane")
        k2 = std::pow(ds.k[0] / double(g.L1), 2) + ds.k[1] * ds.k[1] + ds.k[2] * ds.k[2] + ds.k[3] * ds.k[3];
    double worst = 0.0;
    Series mass{"mass", {}, {}}, energy{"energy", {}, {}};
    for (std::size_t i = 0; i < u.size(); ++i) {
        double t = u.times[i];
        auto me = norms::mass_energy(u.fields[i]);
        std::string err;
        if (ds.kind == "plane") {
            cplx ph = std::polar(1.0, -(k2 + sc.rho * std::norm(ds.amp)) * t);
            cvec ex = u0.values();
            for (auto& z : ex) z *= ph;
            cvec d = u.fields[i].values();
            for (std::size_t j = 0; j < d.size(); ++j) d[j] -= ex[j];
            double e = norms::l2_norm(Field(g, d)) / norms::l2_norm(u0);
            worst = std::max(worst, e);
            err = num(e);
        }
        tr.add({num(t), num(me.mass), num(me.energy), num(norms::h1_norm(u.fields[i])), err});
        mass.x.push_back(t);
        mass.y.push_back(me.mass);
        energy.x.push_back(t);
        energy.y.push_back(me.energy);
    }
    auto cons = solver::check_conservation(u);
    csv::Table sum({"T", "dt", "samples", "mass_drift", "energy_drift", "max_plane_error"});
    sum.add({num(T), num(u.dt), num(u.size()), num(cons.mass_drift), num(cons.energy_drift),
             ds.kind == "plane" ? num(worst) : ""});
    ctx.write("trajectory.csv", tr);
    ctx.write("summary.csv", sum);
    write_field(u.fields.back(), ctx.path("final.field"), u.times.back());
    ctx.plot("conservation.svg", {"Mass and energy", "t", "value"}, {mass, energy});
}

void cmd_conserve(Context& ctx) {
    auto& cfg = ctx.config();
    GridSpec g = cfg.grid();
    solver::SolveConfig sc = cfg.solve();
    double T = cfg.real("T", 1.0);
    bool halve = cfg.flag("halve", true);
    DataSpec ds = data_spec(cfg, "random", 1.0);
    require_config(T > 0.0, "T must be positive");
    if (!ctx.begin({describe(g), "runs at dt " + num(sc.dt) + (halve ? " and " + num(sc.dt / 2) : std::string()),
                    "data " + ds.kind}))
        return;
    Field u0 = make_data(ds, g);
    csv::Table tr({"dt", "t", "mass", "energy", "h1"});
    csv::Table sum({"dt", "mass_drift", "energy_drift", "energy_drift_ratio"});
    std::vector<Series> plots;
    double prev = 0.0;
    for (int run = 0; run < (halve ? 2 : 1); ++run) {
        solver::SolveConfig c = sc;
        c.dt = sc.dt / (run ? 2.0 : 1.0);
        c.record_stride = sc.record_stride * (run ? 2 : 1);
        Trajectory u = solver::evolve(u0, T, c);
        trajectory_table(u, tr, num(c.dt));
        auto cons = solver::check_conservation(u);
        sum.add({num(c.dt), num(cons.mass_drift), num(cons.energy_drift),
                 run ? num(prev / cons.energy_drift) : std::string()});
        prev = cons.energy_drift;
        Series s{"dt=" + num(c.dt), {}, {}};
        for (const auto& row : cons.rows) {
            s.x.push_back(row.t);
            s.y.push_back(std::fabs(row.energy - cons.rows.front().energy) / cons.rows.front().energy);
        }
        plots.push_back(s);
    }
    ctx.write("conservation.csv", tr);
    ctx.write("summary.csv", sum);
    ctx.plot("energy_drift.svg", {"Relative energy drift", "t", "|E(t)-E(0)|/E(0)"}, plots);
}

void cmd_picard(Context& ctx) {
    auto& cfg = ctx.config();
    GridSpec g = cfg.grid();
    solver::SolveConfig sc = cfg.solve();
    double T = cfg.real("T", 0.1);
    DataSpec ds = data_spec(cfg, "random", 0.01);
    require_config(T > 0.0, "T must be positive");
    if (!ctx.begin({describe(g), "interval [0, " + num(T) + "] with dt " + num(sc.dt), "data " + ds.kind})) return;
    auto p = solver::picard_solve(make_data(ds, g), {0.0, T}, sc);
    csv::Table it({"iteration", "difference", "ratio"});
    Series s{"difference", {}, {}};
    for (std::size_t i = 0; i < p.differences.size(); ++i) {
        it.add({num(i + 1), num(p.differences[i]), i && i - 1 < p.ratios.size() ? num(p.ratios[i - 1]) : ""});
        s.x.push_back(double(i + 1));
        s.y.push_back(p.differences[i]);
    }
    csv::Table sum({"iterations", "linear_zprime", "duhamel_residual"});
    sum.add({num(p.iterations), num(p.linear_zprime), num(p.duhamel_residual)});
    ctx.write("iterations.csv", it);
    ctx.write("summary.csv", sum);
    ctx.plot("contraction.svg", {"Picard differences", "iteration", "sup H1 difference", false, true}, {s});
}

void cmd_stability(Context& ctx) {
    auto& cfg = ctx.config();
    GridSpec g = cfg.grid();
    solver::SolveConfig sc = cfg.solve(2e-3);
    double T = cfg.real("T", 0.2);
    auto eps = cfg.reals("eps", {1e-2, 1e-3, 1e-4});
    DataSpec ds = data_spec(cfg, "random", 5.0);
    double dir_sigma = cfg.real("direction_sigma", 1.5);
    require_config(T > 0.0 && !eps.empty() && dir_sigma > 0.0, "need T > 0, dir sigma > 0 and a non-empty eps list");
    for (double e : eps) require_config(e > 0.0, "eps must be positive");
    if (!ctx.begin({describe(g), "base run to T = " + num(T) + " then " + std::to_string(eps.size()) + " perturbed runs"}))
        return;
    Field u0 = make_data(ds, g);
    Trajectory base = solver::evolve(u0, T, sc);
    Trajectory zero = base;
    for (auto& f : zero.fields) f = Field::zeros(g);
    Field dir = ensemble::smooth_random(g, ds.seed + 1, dir_sigma, 1.0);
    csv::Table t({"eps", "eps_in", "data_term", "forcing_term", "deviation", "amplification"});
    std::vector<double> dev;
    for (double e : eps) {
        cvec v = u0.values();
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += e * dir[i];
        auto r = solver::stability_experiment(base, zero, Field(g, v), sc);
        t.add({num(e), num(r.eps_in), num(r.data_term), num(r.forcing_term), num(r.deviation), num(r.amplification)});
        dev.push_back(r.deviation);
    }
    csv::Table sum({"slope", "intercept", "residual"});
    if (eps.size() >= 2) {
        auto fit = strichartz::fit_loglog(eps, dev);
        sum.add({num(fit.slope), num(fit.intercept), num(fit.residual)});
    }
    ctx.write("stability.csv", t);
    ctx.write("summary.csv", sum);
    ctx.plot("stability.svg", {"Deviation against perturbation size", "eps", "sup H1 deviation", true, true},
             {{"deviation", eps, dev}});
}

void cmd_euclid(Context& ctx) {
    auto& cfg = ctx.config();
    solver::EuclidOptions eo;
    eo.torus = cfg.grid(GridSpec{1, 32, 32});
    eo.box = box_from(cfg, "box", eo.box);
    eo.samples = static_cast<int>(cfg.integer("samples", eo.samples));
    eo.max_tail = cfg.real("max_tail", eo.max_tail);
    solver::SolveConfig sc = cfg.solve();
    double dt_scale = cfg.real("dt_scale", 0.02);
    auto Ns = cfg.ints("N", {2, 4, 8});
    double R = cfg.real("R", 4.0), T0 = cfg.real("T0", 1.0), amp = cfg.real("amp", 0.5);
    require_config(R > 0.0 && T0 > 0.0 && amp > 0.0 && dt_scale > 0.0 && eo.samples >= 1,
                   "R, T0, amp, dt_scale and samples must be positive");
    for (int N : Ns) check_scale(eo.torus, N, "N");
    if (!ctx.begin({describe(eo.torus), describe(eo.box), "N in " + std::to_string(Ns.size()) + " values, dt = dt_scale/N^2"}))
        return;
    EuclidField phi = ensemble::band_bump(eo.box, amp);
    csv::Table t({"N", "t", "discrepancy"});
    csv::Table sum({"N", "R", "T0", "sup_discrepancy", "torus_tail", "box_tail", "support_condition", "flags"});
    Series s{"sup discrepancy", {}, {}};
    for (int N : Ns) {
        solver::SolveConfig c = sc;
        c.dt = dt_scale / (double(N) * N);
        auto r = solver::euclidean_comparison(phi, N, R, T0, c, eo);
        for (std::size_t j = 0; j < r.times.size(); ++j) t.add({num(N), num(r.times[j]), num(r.discrepancy[j])});
        sum.add({num(N), num(R), num(T0), num(r.sup_discrepancy), num(r.torus_tail), num(r.box_tail),
                 r.support_condition ? "true" : "false", join_flags(r.flags)});
        s.x.push_back(N);
        s.y.push_back(r.sup_discrepancy);
    }
    ctx.write("comparison.csv", t);
    ctx.write("summary.csv", sum);
    ctx.plot("discrepancy.svg", {"Torus against rescaled Euclidean solution", "N", "sup H1 discrepancy", true, true}, {s});
}

}  // namespace

void register_solver(std::vector<Command>& out) {
    out.push_back({"evolve", "Strang (or Picard) evolution with mass/energy monitor",
                   "  trajectory.csv: t,mass,energy,h1,plane_error\n"
                   "  summary.csv: T,dt,samples,mass_drift,energy_drift,max_plane_error\n  final.field",
                   cmd_evolve});
    out.push_back({"conserve", "Mass and energy drift at dt and dt/2",
                   "  conservation.csv: dt,t,mass,energy,h1\n"
                   "  summary.csv: dt,mass_drift,energy_drift,energy_drift_ratio",
                   cmd_conserve});
    out.push_back({"picard", "Picard iteration on the Duhamel formula",
                   "  iterations.csv: iteration,difference,ratio\n"
                   "  summary.csv: iterations,linear_zprime,duhamel_residual",
                   cmd_picard});
    out.push_back({"stability", "Deviation under data perturbations of size eps",
                   "  stability.csv: eps,eps_in,data_term,forcing_term,deviation,amplification\n"
                   "  summary.csv: slope,intercept,residual",
                   cmd_stability});
    out.push_back({"euclid-compare", "Torus evolution of T_N phi against the rescaled R^4 solution",
                   "  comparison.csv: N,t,discrepancy\n"
                   "  summary.csv: N,R,T0,sup_discrepancy,torus_tail,box_tail,support_condition,flags",
                   cmd_euclid});
}

}  // namespace spnls::cli
