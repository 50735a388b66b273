#include "spnls/spectral.hpp"

#include <cmath>
#include <string>

#include "spnls/error.hpp"
#include "spnls/kernels.hpp"

namespace spnls::spectral {
namespace {

double g(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

void require_nyquist(const GridSpec& spec, int N) {
    require(N <= spec.nyquist(), ErrorKind::OutOfRange,
            "dyadic N=" + std::to_string(N) + " exceeds Nyquist " + std::to_string(spec.nyquist()));
}

}  // namespace

double eta1(double y) {
    double a = std::fabs(y);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    double s = a - 1.0;
    double gs = g(s), g1 = g(1.0 - s);
    return g1 / (gs + g1);
}

double eta4(const std::array<double, 4>& xi) {
    double v = 1.0;
    for (double x : xi) {
        double e = eta1(x);
        v *= e * e;
    }
    return v;
}

double eta_radial(double r) { return eta1(r); }

void require_dyadic(int N, const char* what) {
    require(is_pow2(N), ErrorKind::OutOfRange, std::string(what) + " must be a power of two >= 1, got " + std::to_string(N));
}

int top_dyadic(const GridSpec& spec) {
    double m = std::max(spec.n1 / (2.0 * spec.L1), spec.nper / 2.0);
    int N = 1;
    while (N < m) N *= 2;
    return N;
}

rvec separable(const GridSpec& spec, const std::array<std::function<double(double)>, 4>& w) {
    std::array<rvec, 4> axis;
    for (int a = 0; a < 4; ++a) {
        axis[a].resize(spec.extent(a));
        for (int i = 0; i < spec.extent(a); ++i) axis[a][i] = w[a](spec.freq(a, i));
    }
    rvec out(spec.size());
    std::size_t idx = 0;
    for (int i1 = 0; i1 < spec.n1; ++i1)
        for (int i2 = 0; i2 < spec.nper; ++i2) {
            double w12 = axis[0][i1] * axis[1][i2];
            for (int i3 = 0; i3 < spec.nper; ++i3) {
                double w123 = w12 * axis[2][i3];
                for (int i4 = 0; i4 < spec.nper; ++i4) out[idx++] = w123 * axis[3][i4];
            }
        }
    return out;
}

rvec le_multiplier(const GridSpec& spec, double N) {
    auto w = [N](double x) {
        double e = eta1(x / N);
        return e * e;
    };
    return separable(spec, {w, w, w, w});
}

rvec shell_multiplier(const GridSpec& spec, int N) {
    require_dyadic(N, "N");
    rvec m = le_multiplier(spec, N);
    if (N == 1) return m;
    rvec lo = le_multiplier(spec, N / 2);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] -= lo[i];
    return m;
}

rvec tilde_delta_multiplier(const GridSpec& spec, double delta) {
    require(delta > 0.0 && delta < 1.0, ErrorKind::OutOfRange, "delta must lie in (0,1)");
    rvec out(spec.size(), 0.0);
    int top = top_dyadic(spec);
    for (int N = 1; N <= top; N *= 2) {
        rvec sh = shell_multiplier(spec, N);
        double c = delta * N;
        rvec cut = separable(spec, {[c](double x) { return 1.0 - eta1(x / c); }, [](double) { return 1.0; },
                                    [](double) { return 1.0; }, [](double) { return 1.0; }});
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += sh[i] * cut[i];
    }
    return out;
}

rvec nm_multiplier(const GridSpec& spec, int N, int M) {
    require_dyadic(N, "N");
    require_dyadic(M, "M");
    require(M <= N, ErrorKind::OutOfRange, "M must not exceed N");
    rvec m = le_multiplier(spec, N);
    rvec lo = le_multiplier(spec, N / 2.0);
    std::function<double(double)> w1;
    if (M == 1)
        w1 = [](double x) { return eta1(x / 2.0); };
    else
        w1 = [M](double x) { return eta1(x / (2.0 * M)) - eta1(x / M); };
    rvec cut = separable(spec, {w1, [](double) { return 1.0; }, [](double) { return 1.0; }, [](double) { return 1.0; }});
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = (m[i] - lo[i]) * cut[i];
    return m;
}

cvec propagator_phase(const GridSpec& spec, double t) {
    std::array<cvec, 4> axis;
    for (int a = 0; a < 4; ++a) {
        axis[a].resize(spec.extent(a));
        for (int i = 0; i < spec.extent(a); ++i) {
            double f = spec.freq(a, i);
            double arg = std::fmod(t * f * f, kTwoPi);
            axis[a][i] = cplx(std::cos(arg), -std::sin(arg));
        }
    }
    cvec out(spec.size());
    std::size_t idx = 0;
    for (int i1 = 0; i1 < spec.n1; ++i1)
        for (int i2 = 0; i2 < spec.nper; ++i2) {
            cplx w12 = axis[0][i1] * axis[1][i2];
            for (int i3 = 0; i3 < spec.nper; ++i3) {
                cplx w123 = w12 * axis[2][i3];
                for (int i4 = 0; i4 < spec.nper; ++i4) out[idx++] = w123 * axis[3][i4];
            }
        }
    return out;
}

Spectrum multiply(const Spectrum& s, const rvec& m) {
    require(m.size() == s.size(), ErrorKind::DimensionMismatch, "multiplier size");
    cvec v = s.coeffs();
    simd::active().scale_real(v.data(), m.data(), v.size());
    return Spectrum(s.spec(), std::move(v));
}

Field multiply(const Field& f, const rvec& m) { return inverse_fourier(multiply(forward_fourier(f), m)); }

Spectrum project_le_N(const Spectrum& s, int N) {
    require_dyadic(N, "N");
    require_nyquist(s.spec(), N);
    return multiply(s, le_multiplier(s.spec(), N));
}

Spectrum project_N(const Spectrum& s, int N) {
    require_dyadic(N, "N");
    require_nyquist(s.spec(), N);
    return multiply(s, shell_multiplier(s.spec(), N));
}

Field project_le_N(const Field& f, int N) { return inverse_fourier(project_le_N(forward_fourier(f), N)); }
Field project_N(const Field& f, int N) { return inverse_fourier(project_N(forward_fourier(f), N)); }

Spectrum project_cube(const Spectrum& s, const std::array<long long, 4>& z) {
    auto in_cube = [](double xi, long long c) { return xi >= c - 0.5 && xi < c + 0.5; };
    std::array<std::function<double(double)>, 4> w;
    for (int a = 0; a < 4; ++a) {
        long long c = z[a];
        w[a] = [c, in_cube](double x) { return in_cube(x, c) ? 1.0 : 0.0; };
    }
    return multiply(s, separable(s.spec(), w));
}

Spectrum project_tilde_delta(const Spectrum& s, double delta) {
    return multiply(s, tilde_delta_multiplier(s.spec(), delta));
}

Spectrum project_NM(const Spectrum& s, int N, int M) {
    require_nyquist(s.spec(), N);
    return multiply(s, nm_multiplier(s.spec(), N, M));
}

Spectrum propagate(const Spectrum& s, double t) {
    if (t == 0.0) return s;
    cvec v = s.coeffs();
    cvec ph = propagator_phase(s.spec(), t);
    simd::active().mul_complex(v.data(), ph.data(), v.size());
    return Spectrum(s.spec(), std::move(v));
}

Field propagate(const Field& f, double t) {
    if (t == 0.0) return f;
    return inverse_fourier(propagate(forward_fourier(f), t));
}

Field derivative(const Field& f, int axis) {
    require(axis >= 0 && axis < 4, ErrorKind::OutOfRange, "axis");
    const GridSpec& spec = f.spec();
    Spectrum s = forward_fourier(f);
    cvec& c = s.coeffs();
    std::size_t inner = 1;
    for (int a = axis + 1; a < 4; ++a) inner *= spec.extent(a);
    std::size_t n = spec.extent(axis);
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
        int i = static_cast<int>((idx / inner) % n);
        c[idx] *= cplx(0.0, spec.freq(axis, i));
    }
    return inverse_fourier(s);
}

std::vector<double> grad1(const Field& f) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::abs(f[i]);
    for (int a = 0; a < 4; ++a) {
        Field d = derivative(f, a);
        for (std::size_t i = 0; i < f.size(); ++i) out[i] += std::abs(d[i]);
    }
    return out;
}

}  // namespace spnls::spectral
