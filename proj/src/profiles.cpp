#include "spnls/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spnls/csv.hpp"
#include "spnls/error.hpp"
#include "spnls/fft.hpp"
#include "spnls/kernels.hpp"
#include "spnls/norms.hpp"
#include "spnls/spectral.hpp"

namespace spnls::profiles {
namespace {

constexpr double kGolden = 0.6180339887498949;

struct Peak {
    double value = 0.0;
    std::size_t idx = 0;
};

// Evaluates N^{-1}|e^{itΔ}P_N f| on the grid for one spectrum.
class LambdaEngine {
public:
    explicit LambdaEngine(const Field& f) : spec_(f.spec()), S_(forward_fourier(f)), k2_(laplace_symbol(spec_)) {
        real_ = std::all_of(f.values().begin(), f.values().end(), [](const cplx& z) { return z.imag() == 0.0; });
        // L1²|ξ|² is an integer, so the phases come from a table indexed by it.
        double s = double(spec_.L1) * spec_.L1;
        sq_.resize(k2_.size());
        for (std::size_t i = 0; i < k2_.size(); ++i) {
            sq_[i] = static_cast<int>(std::llround(k2_[i] * s));
            max_sq_ = std::max(max_sq_, sq_[i]);
        }
    }

    const GridSpec& spec() const { return spec_; }
    // Real data give |e^{-itΔ}P_N f| = |e^{itΔ}P_N f|.
    bool real() const { return real_; }

    cvec shell(int N) const {
        rvec m = spectral::shell_multiplier(spec_, N);
        cvec c(S_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = S_.coeffs()[i] * m[i];
        return c;
    }

    Peak eval(const cvec& c, int N, double t) const {
        work_.resize(c.size());
        table_.resize(max_sq_ + 1);
        double w = t / (double(spec_.L1) * spec_.L1);
        for (int m = 0; m <= max_sq_; ++m) {
            double arg = std::fmod(w * m, kTwoPi);
            table_[m] = cplx(std::cos(arg), -std::sin(arg));
        }
        for (std::size_t i = 0; i < c.size(); ++i) work_[i] = c[i] * table_[sq_[i]];
        auto dims = spec_.dims();
        fft::transform(work_.data(), dims, fft::Direction::Backward);
        Peak p;
        double best = -1.0;
        for (std::size_t i = 0; i < work_.size(); ++i) {
            double a = std::norm(work_[i]);
            if (a > best) {
                best = a;
                p.idx = i;
            }
        }
        p.value = std::sqrt(best) / (spec_.volume() * N);
        return p;
    }

private:
    GridSpec spec_;
    Spectrum S_;
    rvec k2_;
    bool real_ = false;
    std::vector<int> sq_;
    int max_sq_ = 0;
    mutable cvec work_, table_;
};

struct Coarse {
    int N = 1;
    double value = 0.0;
    std::size_t ti = 0;
    std::size_t idx = 0;
    cvec coeffs;
};

// N^{-1}‖P_N f‖_∞ ≤ N^{-1}vol^{-1}Σ|ĉ| bounds every t, so shells below the running maximum are skipped.
// Shells at or above min_N keep their own running maximum.
std::vector<Coarse> scan(const LambdaEngine& eng, const std::vector<double>& times, const std::vector<int>& Ns,
                         int min_N = 0) {
    std::vector<Coarse> out(Ns.size());
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t j = 0; j < Ns.size(); ++j) {
        out[j].N = Ns[j];
        out[j].coeffs = eng.shell(Ns[j]);
        double b = 0.0;
        for (const auto& z : out[j].coeffs) b += std::abs(z);
        order.emplace_back(b / (eng.spec().volume() * Ns[j]), j);
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    double best_all = 0.0, best_hi = 0.0;
    for (auto [bound, j] : order) {
        Coarse& c = out[j];
        bool hi = min_N > 0 && c.N >= min_N;
        if (bound == 0.0 || bound <= (hi ? best_hi : best_all)) continue;
        std::vector<std::pair<double, Peak>> memo;
        for (std::size_t i = 0; i < times.size(); ++i) {
            double key = eng.real() ? std::fabs(times[i]) : times[i];
            auto it = std::find_if(memo.begin(), memo.end(), [&](const auto& m) { return m.first == key; });
            Peak p = it != memo.end() ? it->second : eng.eval(c.coeffs, c.N, key);
            if (it == memo.end()) memo.emplace_back(key, p);
            if (p.value > c.value) {
                c.value = p.value;
                c.ti = i;
                c.idx = p.idx;
            }
        }
        best_all = std::max(best_all, c.value);
        if (hi) best_hi = std::max(best_hi, c.value);
    }
    return out;
}

LambdaResult refine(const LambdaEngine& eng, const std::vector<double>& times, const Coarse& c, int iters) {
    const GridSpec& spec = eng.spec();
    double best = c.value, bt = times.empty() ? 0.0 : times[c.ti];
    std::size_t bidx = c.idx;
    if (c.value > 0.0 && times.size() > 1 && iters > 0) {
        double a = times[c.ti == 0 ? 0 : c.ti - 1], b = times[std::min(c.ti + 1, times.size() - 1)];
        auto probe = [&](double t) {
            Peak p = eng.eval(c.coeffs, c.N, t);
            if (p.value > best) {
                best = p.value;
                bt = t;
                bidx = p.idx;
            }
            return p.value;
        };
        double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
        double f1 = probe(x1), f2 = probe(x2);
        for (int i = 0; i < iters; ++i) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kGolden * (b - a);
                f2 = probe(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kGolden * (b - a);
                f1 = probe(x1);
            }
        }
    }
    LambdaResult r;
    r.value = best;
    r.N = c.N;
    r.t = bt;
    std::size_t rem = bidx;
    std::size_t np = spec.nper;
    std::array<std::size_t, 4> stride{np * np * np, np * np, np, 1};
    for (int a = 0; a < 4; ++a) {
        r.shift[a] = static_cast<int>(rem / stride[a]);
        rem %= stride[a];
    }
    r.x = lattice_point(spec, r.shift);
    return r;
}

const Coarse* pick(const std::vector<Coarse>& cs, int min_N) {
    const Coarse* best = nullptr;
    for (const auto& c : cs)
        if (c.N >= min_N && (best == nullptr || c.value > best->value)) best = &c;
    return best;
}

std::vector<double> sorted_times(const std::vector<double>& t) {
    require(!t.empty(), ErrorKind::OutOfRange, "need at least one t sample");
    for (double v : t) require(v >= -1.0 && v <= 1.0, ErrorKind::OutOfRange, "t samples must lie in [-1, 1]");
    std::vector<double> s = t;
    std::sort(s.begin(), s.end());
    return s;
}

void check_scales(const std::vector<int>& Ns) {
    require(!Ns.empty(), ErrorKind::OutOfRange, "need at least one scale");
    for (int N : Ns) spectral::require_dyadic(N, "Lambda scale");
}

Field axpy(const Field& a, cplx c, const Field& b) {
    cvec v = a.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * b[i];
    return Field(a.spec(), std::move(v));
}

template <class F>
F average(const std::vector<F>& xs, std::size_t lo, std::size_t hi) {
    cvec v(xs[lo].size(), cplx(0.0));
    for (std::size_t k = lo; k < hi; ++k)
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += xs[k][i];
    double w = 1.0 / double(hi - lo);
    for (auto& z : v) z *= w;
    return F(xs[lo].spec(), std::move(v));
}

template <class F, class Norm>
double cauchy_of(const std::vector<F>& xs, const F& avg, Norm norm) {
    std::size_t n = xs.size();
    if (n < 2) return 0.0;
    F a = average(xs, 0, n / 2), b = average(xs, n / 2, n);
    cvec d = a.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
    double base = norm(avg);
    return base > 0.0 ? norm(F(a.spec(), std::move(d))) / base : 0.0;
}

double l4_pow(const Field& f) {
    double v = norms::lp_norm(f, 4.0);
    return v * v * v * v;
}

EuclidField box_propagate(const EuclidField& v, double tau) {
    if (tau == 0.0) return v;
    EuclidSpectrum s = forward_fourier(v);
    rvec k2 = laplace_symbol(v.spec());
    for (std::size_t i = 0; i < s.size(); ++i) s.coeffs()[i] *= std::polar(1.0, -std::fmod(tau * k2[i], kTwoPi));
    return inverse_fourier(s);
}

ExtractedProfile extract_impl(const std::vector<Field>& seq, const std::vector<FrameEntry>& frames, double lam,
                              const ProfileOptions& opt) {
    ExtractedProfile ep;
    ep.frames = frames;
    ep.lambda = lam;
    ep.kind = frames.front().kind;
    if (!(lam >= opt.delta) || lam == 0.0) {
        ep.refused = true;
        ep.flags.push_back("extraction refused: Lambda below delta");
        return ep;
    }
    const GridSpec& spec = seq.front().spec();
    std::size_t n = seq.size();
    if (ep.kind == FrameKind::Scale1) {
        std::vector<Field> g;
        for (std::size_t k = 0; k < n; ++k) {
            Point back{};
            for (int a = 0; a < 4; ++a) back[a] = -frames[k].x[a];
            g.push_back(translate(seq[k], back));
        }
        ep.scale1 = average(g, 0, n);
        ep.cauchy = cauchy_of(g, ep.scale1, [](const Field& f) { return norms::h1_norm(f); });
        ep.norm = norms::h1_norm(ep.scale1);
        for (std::size_t k = 0; k < n; ++k) ep.mapped.push_back(translate(ep.scale1, frames[k].x));
    } else {
        std::vector<Field> g;
        for (std::size_t k = 0; k < n; ++k) g.push_back(spectral::propagate(seq[k], frames[k].t));
        auto pull = [&](double R) {
            std::vector<EuclidField> ps;
            for (std::size_t k = 0; k < n; ++k) ps.push_back(pullback(g[k], frames[k].N, R, frames[k].x, opt.box));
            return ps;
        };
        double R = opt.R;
        auto ps = pull(R);
        EuclidField phi = average(ps, 0, n);
        double nm = norms::hdot1_norm(phi);
        while (opt.refine_R && 4.0 * R <= opt.box.side + 1e-12) {
            auto ps2 = pull(2.0 * R);
            EuclidField phi2 = average(ps2, 0, n);
            double nm2 = norms::hdot1_norm(phi2);
            if (!(nm2 > (1.0 + opt.R_growth) * nm)) break;
            R *= 2.0;
            ps = std::move(ps2);
            phi = std::move(phi2);
            nm = nm2;
        }
        ep.R = R;
        ep.euclid = phi;
        ep.norm = nm;
        ep.cauchy = cauchy_of(ps, phi, [](const EuclidField& f) { return norms::hdot1_norm(f); });
        for (std::size_t k = 0; k < n; ++k)
            ep.mapped.push_back(modulate_translate(rescale_TN(phi, frames[k].N, spec), frames[k].t, frames[k].x));
    }
    if (ep.cauchy > opt.cauchy_tol) ep.flags.push_back("non-Cauchy tail: diagnostic " + csv::num(ep.cauchy));
    if (ep.norm < opt.nonzero_c * opt.delta) ep.flags.push_back("profile norm below c*delta");
    return ep;
}

void check_sequence(const std::vector<Field>& seq) {
    require(!seq.empty(), ErrorKind::OutOfRange, "empty sequence");
    for (const auto& f : seq) {
        require(f.spec() == seq.front().spec(), ErrorKind::DimensionMismatch, "sequence elements differ in grid");
        require(f.size() == f.spec().size(), ErrorKind::DimensionMismatch, "field size does not match its grid");
    }
}

}  // namespace

const char* to_string(FrameKind k) { return k == FrameKind::Scale1 ? "scale1" : "euclidean"; }

void FrameEntry::validate() const {
    require(N >= 1.0, ErrorKind::OutOfRange, "frame scale must be >= 1");
    require(t >= -1.0 && t <= 1.0, ErrorKind::OutOfRange, "frame time must lie in [-1, 1]");
    if (kind == FrameKind::Scale1)
        require(N == 1.0 && t == 0.0, ErrorKind::InvariantViolation, "Scale-1 frames have N = 1 and t = 0");
}

double orthogonality_score(const FrameEntry& a, const FrameEntry& b, const GridSpec& spec) {
    double s2 = 0.0;
    for (int j = 0; j < 4; ++j) {
        double P = spec.period(j);
        double d = std::fmod(std::fabs(a.x[j] - b.x[j]), P);
        d = j == 0 ? P / std::numbers::pi * std::sin(std::numbers::pi * d / P) : std::min(d, P - d);
        s2 += d * d;
    }
    return std::fabs(std::log(a.N / b.N)) + a.N * a.N * std::fabs(a.t - b.t) + a.N * std::sqrt(s2);
}

std::vector<double> lambda_times(int n) {
    require(n >= 1, ErrorKind::OutOfRange, "need at least one t sample");
    if (n == 1) return {0.0};
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = -1.0 + 2.0 * i / (n - 1);
    return t;
}

std::vector<int> lambda_scales(const GridSpec& spec) {
    std::vector<int> out;
    for (int N = 1; N <= spectral::top_dyadic(spec); N *= 2) out.push_back(N);
    return out;
}

LambdaResult lambda_functional(const Field& f, const std::vector<double>& t_samples, const std::vector<int>& N_set,
                               int golden_iters) {
    auto times = sorted_times(t_samples);
    check_scales(N_set);
    LambdaEngine eng(f);
    auto cs = scan(eng, times, N_set);
    return refine(eng, times, *pick(cs, 0), golden_iters);
}

LambdaResult lambda_functional(const Field& f) { return lambda_functional(f, lambda_times(), lambda_scales(f.spec())); }

void ProfileOptions::validate() const {
    require(delta > 0.0, ErrorKind::Config, "delta must be positive");
    require(t_samples >= 1 && golden_iters >= 0, ErrorKind::Config, "t_samples >= 1 and golden_iters >= 0 required");
    require(euclid_threshold >= 1 && R > 0.0 && R_growth >= 0.0, ErrorKind::Config, "invalid Euclidean options");
    require(2.0 * R <= box.side + 1e-12, ErrorKind::Config, "window 2R exceeds the box half-width");
    require(max_profiles >= 1, ErrorKind::Config, "max_profiles must be >= 1");
    box.validate();
    if (!N_set.empty()) check_scales(N_set);
}

ExtractedProfile extract_profile(const std::vector<Field>& seq, const std::vector<FrameEntry>& frames,
                                 const ProfileOptions& opt) {
    opt.validate();
    check_sequence(seq);
    require(frames.size() == seq.size(), ErrorKind::DimensionMismatch, "one frame per sequence element required");
    for (const auto& fr : frames) {
        fr.validate();
        require(fr.kind == frames.front().kind, ErrorKind::InvariantViolation, "mixed frame kinds");
        to_lattice(seq.front().spec(), fr.x);
    }
    auto times = lambda_times(opt.t_samples);
    auto Ns = opt.N_set.empty() ? lambda_scales(seq.front().spec()) : opt.N_set;
    double lam = 0.0;
    for (const auto& f : seq) lam = std::max(lam, lambda_functional(f, times, Ns, opt.golden_iters).value);
    return extract_impl(seq, frames, lam, opt);
}

double h1_inner(const Field& a, const Field& b) {
    require(a.spec() == b.spec(), ErrorKind::DimensionMismatch, "fields on different grids");
    Spectrum A = forward_fourier(a), B = forward_fourier(b);
    rvec k2 = laplace_symbol(a.spec());
    cplx s = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) s += (1.0 + k2[i]) * A.coeffs()[i] * std::conj(B.coeffs()[i]);
    return s.real() / a.spec().volume();
}

ProfileDecomposition profile_decompose(const std::vector<Field>& seq, const ProfileOptions& opt) {
    opt.validate();
    check_sequence(seq);
    const GridSpec& spec = seq.front().spec();
    auto times = lambda_times(opt.t_samples);
    auto Ns = opt.N_set.empty() ? lambda_scales(spec) : opt.N_set;
    std::size_t n = seq.size();

    ProfileDecomposition d;
    d.delta = opt.delta;
    d.fields = seq;
    std::vector<Field> rem = seq;
    while (true) {
        std::vector<LambdaResult> full(n), euc(n);
        std::vector<char> has_euc(n, 0);
        double lam = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            LambdaEngine eng(rem[k]);
            auto cs = scan(eng, times, Ns, opt.euclid_threshold);
            full[k] = refine(eng, times, *pick(cs, 0), opt.golden_iters);
            lam = std::max(lam, full[k].value);
            if (const Coarse* c = pick(cs, opt.euclid_threshold)) {
                euc[k] = c == pick(cs, 0) ? full[k] : refine(eng, times, *c, opt.golden_iters);
                has_euc[k] = 1;
            }
        }
        d.remainder_lambda.assign(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) d.remainder_lambda[k] = full[k].value;
        d.lambda_remainder = lam;
        if (lam <= opt.delta) break;
        if (static_cast<int>(d.profiles.size()) >= opt.max_profiles) {
            d.cap_hit = true;
            d.flags.push_back("profile cap reached with Lambda " + csv::num(lam) + " > delta");
            break;
        }
        bool euclid = true;
        for (std::size_t k = 0; k < n && euclid; ++k) {
            euclid = has_euc[k] && euc[k].value > opt.delta;
            if (euclid && k > 0) euclid = euc[k].N >= euc[k - 1].N;
        }
        std::vector<FrameEntry> frames(n);
        for (std::size_t k = 0; k < n; ++k) {
            FrameEntry& fr = frames[k];
            if (euclid) {
                fr.kind = FrameKind::Euclidean;
                fr.N = euc[k].N;
                fr.t = fr.N * fr.N * std::fabs(euc[k].t) <= opt.t_snap ? 0.0 : euc[k].t;
                fr.x = euc[k].x;
            } else {
                fr.x = full[k].x;
            }
        }
        ExtractedProfile ep = extract_impl(rem, frames, lam, opt);
        ++d.iterations;
        if (ep.refused) {
            d.flags.insert(d.flags.end(), ep.flags.begin(), ep.flags.end());
            break;
        }
        for (std::size_t k = 0; k < n; ++k) rem[k] = axpy(rem[k], -1.0, ep.mapped[k]);
        d.profiles.push_back(std::move(ep));
    }
    d.remainder = std::move(rem);
    d.count_constant = double(d.profiles.size()) * opt.delta * opt.delta;
    d.orthogonality = orthogonality_report(d);
    return d;
}

OrthogonalityReport orthogonality_report(const ProfileDecomposition& d) {
    OrthogonalityReport r;
    std::size_t n = d.fields.size(), P = d.profiles.size();
    require(d.remainder.size() == n, ErrorKind::DimensionMismatch, "remainder count differs from sequence length");
    for (const auto& p : d.profiles)
        require(p.mapped.size() == n && p.frames.size() == n, ErrorKind::DimensionMismatch,
                "profile mapped fields differ from sequence length");
    auto resid = [](double whole, double parts) { return whole > 0.0 ? std::fabs(whole - parts) / whole : std::fabs(parts); };
    std::vector<std::vector<double>> nh1(P, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        double l2 = 0.0, hd = 0.0, l4 = 0.0;
        for (std::size_t a = 0; a < P; ++a) {
            const Field& m = d.profiles[a].mapped[k];
            l2 += std::pow(norms::l2_norm(m), 2);
            hd += std::pow(norms::hdot1_norm(m), 2);
            l4 += l4_pow(m);
            nh1[a][k] = norms::h1_norm(m);
        }
        const Field& R = d.remainder[k];
        l2 += std::pow(norms::l2_norm(R), 2);
        hd += std::pow(norms::hdot1_norm(R), 2);
        l4 += l4_pow(R);
        r.l2_residual.push_back(resid(std::pow(norms::l2_norm(d.fields[k]), 2), l2));
        r.hdot1_residual.push_back(resid(std::pow(norms::hdot1_norm(d.fields[k]), 2), hd));
        r.l4_residual.push_back(resid(l4_pow(d.fields[k]), l4));
    }
    for (std::size_t k = 0; k < n; ++k) {
        r.max_l2 = std::max(r.max_l2, r.l2_residual[k]);
        r.max_hdot1 = std::max(r.max_hdot1, r.hdot1_residual[k]);
        r.max_l4 = std::max(r.max_l4, r.l4_residual[k]);
    }
    r.inner.assign(P, std::vector<double>(P, 0.0));
    r.score.assign(P, std::vector<double>(P, 0.0));
    if (n == 0) return r;
    const GridSpec& spec = d.fields.front().spec();
    for (std::size_t a = 0; a < P; ++a)
        for (std::size_t b = 0; b < P; ++b) {
            double ip = 0.0, sc = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n; ++k) {
                double den = nh1[a][k] * nh1[b][k];
                if (den > 0.0)
                    ip = std::max(ip, std::fabs(h1_inner(d.profiles[a].mapped[k], d.profiles[b].mapped[k])) / den);
                sc = std::min(sc, orthogonality_score(d.profiles[a].frames[k], d.profiles[b].frames[k], spec));
            }
            r.inner[a][b] = ip;
            r.score[a][b] = sc;
        }
    return r;
}

std::string OrthogonalityReport::csv() const {
    csv::Table tb({"element", "l2_residual", "hdot1_residual", "l4_residual"});
    for (std::size_t k = 0; k < l2_residual.size(); ++k)
        tb.add({csv::num(k), csv::num(l2_residual[k]), csv::num(hdot1_residual[k]), csv::num(l4_residual[k])});
    std::string out = tb.str();
    out += "# max,l2=" + csv::num(max_l2) + ",hdot1=" + csv::num(max_hdot1) + ",l4=" + csv::num(max_l4) + "\n";
    for (std::size_t a = 0; a < inner.size(); ++a)
        for (std::size_t b = a + 1; b < inner.size(); ++b)
            out += "# pair," + csv::num(a) + "," + csv::num(b) + ",inner=" + csv::num(inner[a][b]) +
                   ",score=" + csv::num(score[a][b]) + "\n";
    return out;
}

std::string ProfileDecomposition::csv() const {
    csv::Table tb({"profile", "kind", "element", "N", "t", "x1", "x2", "x3", "x4", "norm", "R", "cauchy", "lambda"});
    for (std::size_t a = 0; a < profiles.size(); ++a) {
        const auto& p = profiles[a];
        for (std::size_t k = 0; k < p.frames.size(); ++k) {
            const auto& f = p.frames[k];
            tb.add({csv::num(a), to_string(p.kind), csv::num(k), csv::num(f.N), csv::num(f.t), csv::num(f.x[0]),
                    csv::num(f.x[1]), csv::num(f.x[2]), csv::num(f.x[3]), csv::num(p.norm), csv::num(p.R),
                    csv::num(p.cauchy), csv::num(p.lambda)});
        }
    }
    std::string out = tb.str();
    out += "# summary,delta=" + csv::num(delta) + ",profiles=" + csv::num(profiles.size()) +
           ",lambda_remainder=" + csv::num(lambda_remainder) + ",count_constant=" + csv::num(count_constant) +
           ",iterations=" + csv::num(iterations) + ",cap_hit=" + (cap_hit ? "1" : "0") +
           ",max_l2=" + csv::num(orthogonality.max_l2) + ",max_hdot1=" + csv::num(orthogonality.max_hdot1) +
           ",max_l4=" + csv::num(orthogonality.max_l4) + "\n";
    for (const auto& p : profiles)
        for (const auto& f : p.flags) out += "# flag," + f + "\n";
    for (const auto& f : flags) out += "# flag," + f + "\n";
    return out;
}

EuclidField smooth_profile(const EuclidField& phi, double eps, int* K, double* achieved) {
    const EuclidSpec& box = phi.spec();
    EuclidSpectrum s = forward_fourier(phi);
    rvec k2 = laplace_symbol(box);
    double vol = box.volume();
    int k = 1;
    double err = 0.0;
    bool exact = eps <= 0.0;
    rvec m(s.size());
    if (!exact) {
        for (;; k *= 2) {
            double e2 = 0.0;
            std::size_t idx = 0;
            for (int a = 0; a < box.n4; ++a)
                for (int b = 0; b < box.n4; ++b)
                    for (int c = 0; c < box.n4; ++c)
                        for (int d = 0; d < box.n4; ++d, ++idx) {
                            m[idx] = spectral::eta4({box.freq(a) / k, box.freq(b) / k, box.freq(c) / k, box.freq(d) / k});
                            e2 += k2[idx] * std::norm(s.coeffs()[idx]) * std::pow(1.0 - m[idx], 2);
                        }
            err = std::sqrt(e2 / vol);
            if (err <= eps) break;
            if (k > 2.0 * box.nyquist()) {
                err = 0.0;
                exact = true;
                break;
            }
        }
    } else {
        k = 0;
    }
    if (K) *K = k;
    if (achieved) *achieved = err;
    if (exact) return phi;
    for (std::size_t i = 0; i < s.size(); ++i) s.coeffs()[i] *= m[i];
    return inverse_fourier(s);
}

NonlinearProfileReport nonlinear_profile_experiment(const EuclidField& phi, const std::vector<FrameEntry>& frames,
                                                    double eps, double R, double T0, const solver::SolveConfig& cfg,
                                                    const solver::EuclidOptions& opt) {
    require(!frames.empty(), ErrorKind::OutOfRange, "need at least one frame");
    require(eps >= 0.0, ErrorKind::OutOfRange, "eps must be non-negative");
    NonlinearProfileReport rep;
    rep.eps = eps;
    rep.R = R;
    rep.T0 = T0;
    EuclidField sm = smooth_profile(phi, eps, &rep.K, &rep.achieved);
    for (const auto& fr : frames) {
        fr.validate();
        to_lattice(opt.torus, fr.x);
        NonlinearProfileRow row;
        row.frame = fr;
        if (fr.t == 0.0) {
            auto c = solver::euclidean_comparison(sm, fr.N, R, T0, cfg, opt);
            row.times = c.times;
            row.discrepancy = c.discrepancy;
            for (const auto& f : c.flags) rep.flags.push_back("N=" + csv::num(fr.N) + ": " + f);
        } else {
            require(fr.N >= 1.0 && R > 0.0 && T0 > 0.0 && opt.samples >= 1, ErrorKind::OutOfRange,
                    "nonlinear profile experiment needs R > 0, T0 > 0 and samples >= 1");
            double N = fr.N, half = T0 / (N * N);
            Field U0 = modulate_translate(rescale_TN(sm, N, opt.torus), fr.t, fr.x);
            std::vector<double> s;
            for (int j = -opt.samples; j <= opt.samples; ++j) {
                s.push_back(half * j / opt.samples);
                row.times.push_back(fr.t + s.back());
            }
            solver::SolveConfig tcfg = cfg;
            tcfg.resolution_tol = std::max(cfg.resolution_tol, opt.max_tail);
            auto U = solver::evolve_at(U0, 0.0, row.times, tcfg);
            solver::SolveConfig bcfg = tcfg;
            bcfg.dt = cfg.dt * N * N;
            std::vector<double> tau;
            for (double v : s) tau.push_back(v * N * N);
            auto V = solver::evolve_at(box_propagate(sm, -N * N * fr.t), -N * N * fr.t, tau, bcfg);
            for (std::size_t j = 0; j < U.size(); ++j) {
                Field VRN = translate(transfer_to_torus(V[j], N, R, opt.torus, true), fr.x);
                row.discrepancy.push_back(norms::h1_norm(axpy(U[j], -1.0, VRN)));
            }
        }
        for (double v : row.discrepancy) row.sup_discrepancy = std::max(row.sup_discrepancy, v);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::string NonlinearProfileReport::csv() const {
    csv::Table tb({"N", "t_frame", "x1", "x2", "x3", "x4", "t", "discrepancy"});
    for (const auto& r : rows)
        for (std::size_t j = 0; j < r.times.size(); ++j)
            tb.add({csv::num(r.frame.N), csv::num(r.frame.t), csv::num(r.frame.x[0]), csv::num(r.frame.x[1]),
                    csv::num(r.frame.x[2]), csv::num(r.frame.x[3]), csv::num(r.times[j]), csv::num(r.discrepancy[j])});
    std::string out = tb.str();
    out += "# summary,eps=" + csv::num(eps) + ",K=" + csv::num(K) + ",achieved=" + csv::num(achieved) + ",R=" + csv::num(R) +
           ",T0=" + csv::num(T0);
    for (const auto& r : rows) out += ",sup_N" + csv::num(r.frame.N) + "=" + csv::num(r.sup_discrepancy);
    out += "\n";
    for (const auto& f : flags) out += "# flag," + f + "\n";
    return out;
}

}  // namespace spnls::profiles
