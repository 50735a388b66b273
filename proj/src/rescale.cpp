#include "spnls/rescale.hpp"

#include <cmath>
#include <string>

#include "spnls/error.hpp"
#include "spnls/kernels.hpp"
#include "spnls/spectral.hpp"

namespace spnls::profiles {
namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

// out[b][p][r] = Σ_k E[p][k] in[b][k][r]
cvec contract(const cvec& in, std::size_t before, std::size_t n, std::size_t after, const cvec& E, std::size_t m) {
    cvec out(before * m * after);
    const auto& K = simd::active();
    for (std::size_t b = 0; b < before; ++b)
        for (std::size_t p = 0; p < m; ++p) {
            cplx* dst = out.data() + (b * m + p) * after;
            for (std::size_t k = 0; k < n; ++k) {
                cplx e = E[p * n + k];
                const cplx* src = in.data() + (b * n + k) * after;
                if (after == 1)
                    dst[0] += e * src[0];
                else
                    K.axpy(e, src, dst, after);
            }
        }
    return out;
}

// Evaluation matrix e^{i f_k y_p}; the unpaired Nyquist mode uses cos so real data stay real.
cvec eval_matrix(const std::vector<double>& freqs, const std::vector<double>& pts) {
    std::size_t n = freqs.size(), m = pts.size();
    cvec E(m * n);
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t k = 0; k < n; ++k) {
            double arg = freqs[k] * pts[p];
            E[p * n + k] = (k == n / 2) ? cplx(std::cos(arg), 0.0) : cplx(std::cos(arg), std::sin(arg));
        }
    return E;
}

cvec tensor_eval_coeffs(cvec c, const std::array<int, 4>& dims, const std::array<std::vector<double>, 4>& freqs,
                        const std::array<std::vector<double>, 4>& pts, double inv_vol) {
    std::size_t before = 1;
    for (int a = 0; a < 4; ++a) {
        std::size_t after = 1;
        for (int b = a + 1; b < 4; ++b) after *= dims[b];
        c = contract(c, before, dims[a], after, eval_matrix(freqs[a], pts[a]), pts[a].size());
        before *= pts[a].size();
    }
    for (cplx& z : c) z *= inv_vol;
    return c;
}

double norm4(const Point& p) { return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]); }

}  // namespace

LatticeShift to_lattice(const GridSpec& spec, const Point& x0) {
    LatticeShift s{};
    for (int a = 0; a < 4; ++a) {
        double q = x0[a] / spec.dx(a);
        double r = std::round(q);
        require(std::fabs(q - r) <= 1e-9 * std::max(1.0, std::fabs(q)), ErrorKind::OutOfRange,
                "translation point is not grid aligned along axis " + std::to_string(a));
        s[a] = wrap(static_cast<int>(static_cast<long long>(r) % spec.extent(a)), spec.extent(a));
    }
    return s;
}

Point lattice_point(const GridSpec& spec, const LatticeShift& s) {
    Point p{};
    for (int a = 0; a < 4; ++a) p[a] = spec.coord(a, wrap(s[a], spec.extent(a)));
    return p;
}

double torus_distance(const GridSpec& spec, const Point& a, const Point& b) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) {
        double P = spec.period(j);
        double d = std::fmod(std::fabs(a[j] - b[j]), P);
        d = std::min(d, P - d);
        s += d * d;
    }
    return std::sqrt(s);
}

Field translate(const Field& f, const LatticeShift& s) {
    const GridSpec& spec = f.spec();
    int n1 = spec.n1, np = spec.nper;
    cvec out(f.size());
    std::size_t idx = 0;
    for (int i1 = 0; i1 < n1; ++i1) {
        int j1 = wrap(i1 - s[0], n1);
        for (int i2 = 0; i2 < np; ++i2) {
            int j2 = wrap(i2 - s[1], np);
            for (int i3 = 0; i3 < np; ++i3) {
                int j3 = wrap(i3 - s[2], np);
                std::size_t base = ((static_cast<std::size_t>(j1) * np + j2) * np + j3) * np;
                for (int i4 = 0; i4 < np; ++i4) out[idx++] = f[base + wrap(i4 - s[3], np)];
            }
        }
    }
    return Field(spec, std::move(out));
}

Field translate(const Field& f, const Point& x0) { return translate(f, to_lattice(f.spec(), x0)); }

Field modulate_translate(const Field& f, double t0, const Point& x0) {
    LatticeShift s = to_lattice(f.spec(), x0);
    return translate(spectral::propagate(f, -t0), s);
}

cvec tensor_eval(const Field& f, const std::array<std::vector<double>, 4>& pts) {
    const GridSpec& spec = f.spec();
    std::array<std::vector<double>, 4> freqs;
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < spec.extent(a); ++i) freqs[a].push_back(spec.freq(a, i));
    return tensor_eval_coeffs(forward_fourier(f).coeffs(), spec.dims(), freqs, pts, 1.0 / spec.volume());
}

cvec tensor_eval(const EuclidField& f, const std::array<std::vector<double>, 4>& pts) {
    const EuclidSpec& spec = f.spec();
    std::array<std::vector<double>, 4> freqs;
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < spec.n4; ++i) freqs[a].push_back(spec.freq(i));
    return tensor_eval_coeffs(forward_fourier(f).coeffs(), spec.dims(), freqs, pts, 1.0 / spec.volume());
}

Field transfer_to_torus(const EuclidField& v, double N, double R, const GridSpec& spec, bool periodize) {
    require(N >= 1.0, ErrorKind::OutOfRange, "N must be >= 1");
    spec.validate();
    double reach = R > 0.0 ? 2.0 * R : v.spec().side;  // support radius in box units
    require(reach <= v.spec().side + 1e-12, ErrorKind::OutOfRange,
            "window radius " + std::to_string(reach) + " exceeds the box half-width");
    double rx = reach / N;
    if (!periodize)
        for (int a = 0; a < 4; ++a)
            require(rx < 0.5 * spec.period(a), ErrorKind::OutOfRange,
                    "rescaled support does not fit in the torus fundamental domain");
    require(N <= spec.nyquist(), ErrorKind::Resolution, "scale 1/N is not resolved by the grid");

    std::array<std::vector<int>, 4> idx;
    std::array<std::vector<double>, 4> pts;
    for (int a = 0; a < 4; ++a) {
        double P = spec.period(a);
        int images = static_cast<int>(std::ceil(rx / P)) + 1;
        for (int m = -images; m <= images; ++m)
            for (int i = 0; i < spec.extent(a); ++i) {
                double x = spec.coord(a, i) + m * P;
                if (std::fabs(x) < rx) {
                    idx[a].push_back(i);
                    pts[a].push_back(N * x);
                }
            }
    }
    cvec vals = tensor_eval(v, pts);
    cvec out(spec.size());
    std::size_t k = 0;
    int np = spec.nper;
    for (std::size_t a0 = 0; a0 < pts[0].size(); ++a0)
        for (std::size_t a1 = 0; a1 < pts[1].size(); ++a1)
            for (std::size_t a2 = 0; a2 < pts[2].size(); ++a2)
                for (std::size_t a3 = 0; a3 < pts[3].size(); ++a3, ++k) {
                    Point y{pts[0][a0], pts[1][a1], pts[2][a2], pts[3][a3]};
                    double w = R > 0.0 ? spectral::eta_radial(norm4(y) / R) : 1.0;
                    if (w == 0.0) continue;
                    std::size_t pos =
                        ((static_cast<std::size_t>(idx[0][a0]) * np + idx[1][a1]) * np + idx[2][a2]) * np + idx[3][a3];
                    out[pos] += N * w * vals[k];
                }
    return Field(spec, std::move(out));
}

Field rescale_TN(const EuclidField& phi, double N, const GridSpec& spec) {
    return transfer_to_torus(phi, N, std::sqrt(N), spec);
}

EuclidField pullback(const Field& f, double N, double R, const Point& x0, const EuclidSpec& box) {
    require(N >= 1.0 && R > 0.0, ErrorKind::OutOfRange, "pullback needs N >= 1 and R > 0");
    require(2.0 * R <= box.side + 1e-12, ErrorKind::OutOfRange, "window 2R exceeds the box half-width");
    std::array<std::vector<double>, 4> pts;
    std::array<std::vector<double>, 4> wts;
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < box.n4; ++i) {
            double y = box.coord(i);
            pts[a].push_back(x0[a] + y / N);
            double e = spectral::eta1(y / R);
            wts[a].push_back(e * e);
        }
    cvec vals = tensor_eval(f, pts);
    std::size_t k = 0;
    int n = box.n4;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d, ++k) vals[k] *= wts[0][a] * wts[1][b] * wts[2][c] * wts[3][d] / N;
    return EuclidField(box, std::move(vals));
}

EuclidField window(const EuclidField& v, double R) {
    const EuclidSpec& s = v.spec();
    cvec out = v.values();
    std::size_t k = 0;
    int n = s.n4;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d, ++k) {
                    Point y{s.coord(a), s.coord(b), s.coord(c), s.coord(d)};
                    out[k] *= spectral::eta_radial(norm4(y) / R);
                }
    return EuclidField(s, std::move(out));
}

}  // namespace spnls::profiles
