#include <algorithm>
#include <cmath>
#include <cstdint>

#include "spnls/circle.hpp"
#include "spnls/csv.hpp"
#include "spnls/ensemble.hpp"
#include "spnls/error.hpp"
#include "spnls/fft.hpp"

namespace spnls::circle {
namespace {

constexpr double kHalfWindow = 1.0 / 1024.0;

void apply_phase(const GridSpec& spec, const cvec& c, double t, cvec& out) {
    std::array<cvec, 4> axis;
    for (int a = 0; a < 4; ++a) {
        axis[a].resize(spec.extent(a));
        for (int i = 0; i < spec.extent(a); ++i) {
            double f = spec.freq(a, i);
            double arg = std::fmod(t * f * f, kTwoPi);
            axis[a][i] = cplx(std::cos(arg), -std::sin(arg));
        }
    }
    out.resize(c.size());
    std::size_t idx = 0;
    for (int i1 = 0; i1 < spec.n1; ++i1)
        for (int i2 = 0; i2 < spec.nper; ++i2) {
            cplx w12 = axis[0][i1] * axis[1][i2];
            for (int i3 = 0; i3 < spec.nper; ++i3) {
                cplx w123 = w12 * axis[2][i3];
                for (int i4 = 0; i4 < spec.nper; ++i4, ++idx) out[idx] = c[idx] * w123 * axis[3][i4];
            }
        }
}

}  // namespace

std::vector<double> distributional_lambdas(int N, double p0, int count) {
    require(count >= 1, ErrorKind::OutOfRange, "need at least one lambda");
    auto w = lambda_window(N, p0);
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = count == 1 ? w[0] : w[0] * std::pow(w[1] / w[0], double(i) / (count - 1));
    out.back() = count == 1 ? w[0] : w[1];
    return out;
}

std::string DistributionalReport::csv() const {
    csv::Table tb({"N", "draw", "lambda", "measure", "band", "constant"});
    for (const auto& r : rows)
        tb.add({csv::num(N), csv::num(r.draw), csv::num(r.lambda), csv::num(r.measure), csv::num(r.band),
                csv::num(r.constant)});
    std::string out = tb.str();
    out += "# summary,N=" + csv::num(N) + ",p0=" + csv::num(p0) + ",draws=" + csv::num(draws) +
           ",max_constant=" + csv::num(overall_max) + ",field_max=" + csv::num(field_max) +
           ",monotone=" + (monotone ? std::string("1") : std::string("0")) + ",grid=" + grid + "\n";
    for (const auto& f : flags) out += "# flag," + f + "\n";
    return out;
}

DistributionalReport distributional_check(int N, const std::vector<double>& lambdas, double p0, int draws,
                                          const DistrOptions& opt) {
    require(N >= 1 && is_pow2(N), ErrorKind::OutOfRange, "N must be a power of two");
    require(draws >= 1, ErrorKind::OutOfRange, "need at least one draw");
    require(!lambdas.empty() && lambdas.size() < 255, ErrorKind::OutOfRange, "lambda grid size must be in [1, 254]");
    require(opt.oversample >= 1 && is_pow2(opt.oversample) && opt.t_samples >= 1, ErrorKind::OutOfRange,
            "oversample must be a power of two and t_samples >= 1");
    auto win = lambda_window(N, p0);
    for (double l : lambdas)
        require(l >= win[0] * (1.0 - 1e-12) && l <= win[1] * (1.0 + 1e-12), ErrorKind::OutOfRange,
                "lambda outside the admissible window");
    std::vector<double> lam = lambdas;
    std::sort(lam.begin(), lam.end());

    int nper = 2 * N * opt.oversample;
    GridSpec spec{opt.L1, nper * opt.L1, nper};
    spec.validate();
    DistributionalReport rep;
    rep.N = N;
    rep.p0 = p0;
    rep.draws = draws;
    rep.lambdas = lam;
    rep.grid = "L1=" + std::to_string(spec.L1) + " n1=" + std::to_string(spec.n1) + " nper=" + std::to_string(spec.nper) +
               " t_samples=" + std::to_string(opt.t_samples);
    rep.max_constant.assign(lam.size(), 0.0);

    rvec w(spec.size(), 0.0);
    {
        std::size_t idx = 0;
        for (int i1 = 0; i1 < spec.n1; ++i1)
            for (int i2 = 0; i2 < spec.nper; ++i2)
                for (int i3 = 0; i3 < spec.nper; ++i3)
                    for (int i4 = 0; i4 < spec.nper; ++i4, ++idx) {
                        double a = spec.freq(0, i1), b = spec.freq(1, i2), c = spec.freq(2, i3), d = spec.freq(3, i4);
                        w[idx] = a * a + b * b + c * c + d * d < double(N) * N ? 1.0 : 0.0;
                    }
    }
    std::vector<double> lam2(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) lam2[i] = lam[i] * lam[i];
    const std::size_t n = spec.size();
    const int nt = opt.t_samples;
    double dt = 2.0 * kHalfWindow / nt;
    double cell = spec.cell_volume() * dt;
    double shape = std::pow(double(N), 2.0 * p0 - 6.0);
    auto dims = spec.dims();
    double inv = 1.0 / spec.volume();
    const std::array<int, 4> ext{spec.n1, spec.nper, spec.nper, spec.nper};
    const std::array<std::size_t, 4> stride{std::size_t(spec.nper) * spec.nper * spec.nper,
                                            std::size_t(spec.nper) * spec.nper, std::size_t(spec.nper), 1};

    std::vector<std::uint8_t> level(n * nt);
    cvec work;
    for (int d = 0; d < draws; ++d) {
        auto rng = ensemble::make_rng(opt.seed, {0x4453ULL, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(d)});
        auto kind = d % 2 == 0 ? ensemble::DrawKind::Coherent : ensemble::DrawKind::Gaussian;
        Spectrum s = ensemble::weighted_draw(spec, w, rng, kind, -kHalfWindow, kHalfWindow);
        // ‖m‖_{L²(ℝ×ℤ³)} = 1 corresponds to ‖F‖_{L²} = (2π)².
        double scale = kTwoPi * kTwoPi * inv;
        std::vector<std::size_t> counts(lam.size(), 0), band(lam.size(), 0);
        for (int it = 0; it < nt; ++it) {
            double t = -kHalfWindow + dt * (it + 0.5);
            apply_phase(spec, s.coeffs(), t, work);
            fft::transform(work.data(), dims, fft::Direction::Backward);
            std::uint8_t* lv = level.data() + std::size_t(it) * n;
            for (std::size_t i = 0; i < n; ++i) {
                double a2 = std::norm(work[i]) * scale * scale;
                rep.field_max = std::max(rep.field_max, std::sqrt(a2));
                std::uint8_t l = 0;
                while (l < lam2.size() && a2 >= lam2[l]) ++l;
                lv[i] = l;
            }
        }
        // Cells whose level differs from a neighbour lie on a level-set boundary.
        auto neighbours = [&](std::size_t cell_idx, int it, auto&& visit) {
            std::size_t rem = cell_idx;
            for (int a = 0; a < 4; ++a) {
                int coord = static_cast<int>(rem / stride[a]);
                rem %= stride[a];
                std::size_t up = coord + 1 == ext[a] ? cell_idx - std::size_t(coord) * stride[a] : cell_idx + stride[a];
                std::size_t dn = coord == 0 ? cell_idx + std::size_t(ext[a] - 1) * stride[a] : cell_idx - stride[a];
                visit(it, up);
                visit(it, dn);
            }
            if (it > 0) visit(it - 1, cell_idx);
            if (it + 1 < nt) visit(it + 1, cell_idx);
        };
        auto mark = [&](int it, std::size_t c) {
            std::uint8_t own = level[std::size_t(it) * n + c], lo = own, hi = own;
            neighbours(c, it, [&](int jt, std::size_t m) {
                std::uint8_t v = level[std::size_t(jt) * n + m];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            });
            for (int i = lo; i < hi; ++i) ++band[i];
        };
        std::vector<std::pair<int, std::size_t>> outside;
        for (int it = 0; it < nt; ++it) {
            const std::uint8_t* lv = level.data() + std::size_t(it) * n;
            for (std::size_t c = 0; c < n; ++c) {
                if (lv[c] == 0) continue;
                for (int i = 0; i < lv[c]; ++i) ++counts[i];
                mark(it, c);
                neighbours(c, it, [&](int jt, std::size_t m) {
                    if (level[std::size_t(jt) * n + m] == 0) outside.emplace_back(jt, m);
                });
            }
        }
        std::sort(outside.begin(), outside.end());
        outside.erase(std::unique(outside.begin(), outside.end()), outside.end());
        for (auto [it, c] : outside) mark(it, c);

        for (std::size_t i = 0; i < lam.size(); ++i) {
            DistrRow r;
            r.draw = d;
            r.lambda = lam[i];
            r.measure = double(counts[i]) * cell;
            r.band = 0.5 * double(band[i]) * cell;
            r.constant = r.measure / (shape * std::pow(lam[i], -p0));
            if (i > 0 && counts[i] > counts[i - 1]) rep.monotone = false;
            rep.max_constant[i] = std::max(rep.max_constant[i], r.constant);
            rep.overall_max = std::max(rep.overall_max, r.constant);
            rep.rows.push_back(r);
        }
    }
    if (lam.back() > rep.field_max) rep.flags.push_back("largest lambda exceeds the sampled field maximum");
    return rep;
}

}  // namespace spnls::circle
