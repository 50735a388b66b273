#include <cmath>
#include <numbers>
#include <sstream>

#include "common.hpp"
#include "spnls/profiles.hpp"
#include "spnls/rescale.hpp"

namespace spnls::cli {

namespace {

using csv::num;
namespace pf = profiles;
using pf::Point;

struct BubbleSpec {
    EuclidSpec gen;
    double radius = 1.2;
    int N = 8;
};

BubbleSpec bubble_spec(RunConfig& cfg, const GridSpec& g) {
    BubbleSpec b;
    b.gen = box_from(cfg, "gen", EuclidSpec{6.0, 32});
    b.radius = cfg.real("bubble_radius", 1.2);
    b.N = static_cast<int>(cfg.integer("bubble_N", 8));
    require_config(b.radius > 0.0, "bubble_radius must be positive");
    check_scale(g, b.N, "bubble_N");
    require_config(2.0 * std::sqrt(double(b.N)) <= b.gen.side, "bubble window 2 sqrt(N) exceeds gen_side");
    return b;
}

Field bubble(const BubbleSpec& b, const GridSpec& g) {
    return pf::rescale_TN(ensemble::radial_bump(b.gen, b.radius), b.N, g);
}

std::vector<double> axis_list(const std::vector<double>& v) {
    require_config(v.size() == 4, "points need four coordinates");
    return v;
}

Point to_point(const std::vector<double>& v) { return {v[0], v[1], v[2], v[3]}; }

void cmd_lambda(Context& ctx) {
    auto& cfg = ctx.config();
    GridSpec g = cfg.grid(GridSpec{1, 32, 32});
    std::string kind = cfg.text("data", "bubble");
    int ts = static_cast<int>(cfg.integer("t_samples", 64));
    int gi = static_cast<int>(cfg.integer("golden_iters", 24));
    auto Ns = cfg.ints("N_set", {});
    require_config(ts >= 2 && gi >= 0, "need t_samples >= 2 and golden_iters >= 0");
    for (int N : Ns) require_config(N >= 1 && (N & (N - 1)) == 0, "N_set must hold powers of two");
    std::function<Field()> make;
    if (kind == "bubble") {
        BubbleSpec b = bubble_spec(cfg, g);
        make = [b, g] { return bubble(b, g); };
    } else {
        DataSpec ds = data_spec(cfg, "random", 1.0);
        make = [ds, g] { return make_data(ds, g); };
    }
    if (Ns.empty()) Ns = pf::lambda_scales(g);
    if (!ctx.begin({describe(g), std::to_string(ts) + " times, " + std::to_string(Ns.size()) + " scales, data " + kind}))
        return;
    auto r = pf::lambda_functional(make(), pf::lambda_times(ts), Ns, gi);
    csv::Table t({"value", "N", "t", "x1", "x2", "x3", "x4"});
    t.add({num(r.value), num(r.N), num(r.t), num(r.x[0]), num(r.x[1]), num(r.x[2]), num(r.x[3])});
    ctx.write("lambda.csv", t);
}

pf::ProfileOptions profile_options(RunConfig& cfg) {
    pf::ProfileOptions o;
    o.delta = cfg.real("delta", o.delta);
    o.t_samples = static_cast<int>(cfg.integer("t_samples", o.t_samples));
    o.N_set = cfg.ints("N_set", {});
    o.golden_iters = static_cast<int>(cfg.integer("golden_iters", o.golden_iters));
    o.euclid_threshold = static_cast<int>(cfg.integer("euclid_threshold", o.euclid_threshold));
    o.R = cfg.real("R", o.R);
    o.refine_R = cfg.flag("refine_R", o.refine_R);
    o.R_growth = cfg.real("R_growth", o.R_growth);
    o.box = box_from(cfg, "box", EuclidSpec{8.0, 32});
    o.t_snap = cfg.real("t_snap", o.t_snap);
    o.cauchy_tol = cfg.real("cauchy_tol", o.cauchy_tol);
    o.nonzero_c = cfg.real("nonzero_c", o.nonzero_c);
    o.max_profiles = static_cast<int>(cfg.integer("max_profiles", o.max_profiles));
    try {
        o.validate();
    } catch (const Error& e) {
        fail(ErrorKind::Config, std::string("invalid profile options: ") + e.what());
    }
    return o;
}

void cmd_decompose(Context& ctx) {
    auto& cfg = ctx.config();
    std::string inputs = cfg.text("inputs", "");
    pf::ProfileOptions o = profile_options(cfg);
    std::function<std::vector<Field>()> make;
    std::string what;
    if (!inputs.empty()) {
        std::vector<std::string> paths;
        std::stringstream ss(inputs);
        for (std::string p; std::getline(ss, p, ',');) paths.push_back(p);
        make = [paths] {
            std::vector<Field> seq;
            for (const auto& p : paths) seq.push_back(read_field(p));
            return seq;
        };
        what = std::to_string(paths.size()) + " input fields";
    } else {
        GridSpec g = cfg.grid(GridSpec{1, 32, 32});
        int elements = static_cast<int>(cfg.integer("elements", 2));
        double amp = cfg.real("gauss_amp", 0.5), sigma = cfg.real("gauss_sigma", 0.5);
        auto center = axis_list(cfg.reals("bubble_center", {-std::numbers::pi, -std::numbers::pi, -std::numbers::pi,
                                                            -std::numbers::pi}));
        auto step = cfg.ints("bubble_step", {0, 0, 0, 1});
        BubbleSpec b = bubble_spec(cfg, g);
        require_config(elements >= 1 && sigma > 0.0 && amp >= 0.0 && step.size() == 4,
                       "need elements >= 1, gauss_sigma > 0, gauss_amp >= 0 and a four-entry bubble_step");
        pf::to_lattice(g, to_point(center));
        make = [=] {
            cvec gv(g.size());
            std::size_t i = 0;
            for (int a = 0; a < g.n1; ++a)
                for (int c = 0; c < g.nper; ++c)
                    for (int d = 0; d < g.nper; ++d)
                        for (int e = 0; e < g.nper; ++e, ++i) {
                            double r2 = std::pow(g.coord(0, a), 2) + std::pow(g.coord(1, c), 2) +
                                        std::pow(g.coord(2, d), 2) + std::pow(g.coord(3, e), 2);
                            gv[i] = amp * std::exp(-r2 / (2.0 * sigma * sigma));
                        }
            Field E = bubble(b, g);
            std::vector<Field> seq;
            for (int k = 0; k < elements; ++k) {
                Point x = to_point(center);
                x[0] += k * step[0] * g.dx1();
                for (int a = 1; a < 4; ++a) x[a] += k * step[a] * g.dxp();
                Field moved = pf::translate(E, x);
                cvec v = gv;
                for (std::size_t j = 0; j < v.size(); ++j) v[j] += moved[j];
                seq.emplace_back(g, std::move(v));
            }
            return seq;
        };
        what = describe(g) + ", synthetic Scale-1 + Euclidean(N=" + std::to_string(b.N) + ") sequence of " +
               std::to_string(elements);
    }
    if (!ctx.begin({what, describe(o.box), "delta " + num(o.delta) + ", " + std::to_string(o.t_samples) + " times"}))
        return;
    auto d = pf::profile_decompose(make(), o);
    ctx.write("decomposition/frames.csv", d.csv());
    ctx.write("decomposition/residuals.csv", d.orthogonality.csv());
    csv::Table sum({"delta", "profiles", "lambda_remainder", "count_constant", "iterations", "cap_hit", "max_l2",
                    "max_hdot1", "max_l4", "max_inner"});
    double inner = 0.0;
    for (std::size_t a = 0; a < d.orthogonality.inner.size(); ++a)
        for (std::size_t b = a + 1; b < d.orthogonality.inner.size(); ++b)
            inner = std::max(inner, d.orthogonality.inner[a][b]);
    sum.add({num(d.delta), num(d.profiles.size()), num(d.lambda_remainder), num(d.count_constant), num(d.iterations),
             d.cap_hit ? "true" : "false", num(d.orthogonality.max_l2), num(d.orthogonality.max_hdot1),
             num(d.orthogonality.max_l4), num(inner)});
    ctx.write("summary.csv", sum);
    for (std::size_t a = 0; a < d.profiles.size(); ++a) {
        const auto& p = d.profiles[a];
        std::string stem = ctx.path("decomposition/profile_" + std::to_string(a));
        if (p.kind == pf::FrameKind::Scale1)
            write_field(p.scale1, stem + ".field");
        else
            write_euclid_field(p.euclid, stem + ".efield");
    }
    for (std::size_t k = 0; k < d.remainder.size(); ++k)
        write_field(d.remainder[k], ctx.path("decomposition/remainder_" + std::to_string(k) + ".field"));
}

}  // namespace

void register_profiles(std::vector<Command>& out) {
    out.push_back({"lambda", "Concentration functional of one field",
                   "  lambda.csv: value,N,t,x1,x2,x3,x4", cmd_lambda});
    out.push_back({"profile-decompose", "Iterative profile extraction on a sequence",
                   "  summary.csv: delta,profiles,lambda_remainder,count_constant,iterations,cap_hit,max_l2,max_hdot1,"
                   "max_l4,max_inner\n"
                   "  decomposition/frames.csv: profile,kind,element,N,t,x1,x2,x3,x4,norm,R,cauchy,lambda\n"
                   "  decomposition/residuals.csv: element,l2_residual,hdot1_residual,l4_residual\n"
                   "  decomposition/profile_<i>.field (Scale-1) or .efield (Euclidean), remainder_<k>.field",
                   cmd_decompose});
}

}  // namespace spnls::cli
