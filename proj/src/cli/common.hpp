#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "spnls/cli/runner.hpp"
#include "spnls/ensemble.hpp"
#include "spnls/error.hpp"
#include "spnls/grid.hpp"

namespace spnls::cli {

inline std::string describe(const GridSpec& g) {
    return "grid L1=" + std::to_string(g.L1) + " n1=" + std::to_string(g.n1) + " nper=" + std::to_string(g.nper) + " (" +
           std::to_string(g.size()) + " points)";
}

inline std::string describe(const EuclidSpec& b) {
    return "box [-" + csv::num(b.side) + "," + csv::num(b.side) + ")^4 n=" + std::to_string(b.n4) + " (" +
           std::to_string(b.size()) + " points)";
}

inline EuclidSpec box_from(RunConfig& cfg, const std::string& prefix, EuclidSpec def) {
    EuclidSpec b;
    b.side = cfg.real(prefix + "_side", def.side);
    b.n4 = static_cast<int>(cfg.integer(prefix + "_n", def.n4));
    if (!(b.side > 0.0) || b.n4 < 2 || (b.n4 & (b.n4 - 1)) != 0)
        fail(ErrorKind::Config, prefix + " box needs side > 0 and a power-of-two n");
    return b;
}

inline void require_config(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::Config, what);
}

inline std::array<int, 4> wave_vector(RunConfig& cfg, const std::vector<int>& def) {
    auto k = cfg.ints("k", def);
    require_config(k.size() == 4, "k needs four integers");
    return {k[0], k[1], k[2], k[3]};
}

// Initial data selected by 'data': plane, random or file.
struct DataSpec {
    std::string kind;
    cplx amp;
    std::array<int, 4> k{};
    double sigma = 0.0, h1 = 0.0;
    std::uint64_t seed = 0;
    std::string input;
};

inline DataSpec data_spec(RunConfig& cfg, const std::string& def_kind, double def_h1) {
    DataSpec d;
    d.kind = cfg.text("data", def_kind);
    d.seed = cfg.seed();
    if (d.kind == "plane") {
        d.amp = cfg.real("amp", 0.5);
        d.k = wave_vector(cfg, {1, 1, 0, 0});
    } else if (d.kind == "random") {
        d.sigma = cfg.real("sigma", 1.5);
        d.h1 = cfg.real("h1", def_h1);
        require_config(d.sigma > 0.0 && d.h1 > 0.0, "sigma and h1 must be positive");
    } else if (d.kind == "file") {
        d.input = cfg.text("input", "");
        require_config(!d.input.empty(), "data = file needs 'input'");
    } else {
        fail(ErrorKind::Config, "data must be plane, random or file, got '" + d.kind + "'");
    }
    return d;
}

inline Field make_data(const DataSpec& d, const GridSpec& g) {
    if (d.kind == "plane") return ensemble::plane_wave(g, d.amp, d.k);
    if (d.kind == "random") return ensemble::smooth_random(g, d.seed, d.sigma, d.h1);
    Field f = read_field(d.input);
    require_config(f.spec().L1 == g.L1 && f.spec().n1 == g.n1 && f.spec().nper == g.nper,
                   "input field grid does not match L1/n1/nper");
    return f;
}

inline std::string join_flags(const std::vector<std::string>& flags) {
    std::string s;
    for (const auto& f : flags) s += (s.empty() ? "" : ";") + f;
    for (auto& c : s)
        if (c == ',' || c == '\n') c = ' ';
    return s;
}

inline std::vector<double> as_doubles(const std::vector<int>& v) { return {v.begin(), v.end()}; }

}  // namespace spnls::cli
