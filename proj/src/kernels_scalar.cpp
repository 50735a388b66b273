#include <algorithm>
#include <cmath>

#include "spnls/kernels.hpp"

namespace spnls::simd {
namespace {

void scale_real(cplx* z, const double* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] *= w[i];
}

void mul_complex(cplx* z, const cplx* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double a = z[i].real(), b = z[i].imag();
        double c = w[i].real(), d = w[i].imag();
        z[i] = cplx(a * c - b * d, a * d + b * c);
    }
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + a.real() * xr - a.imag() * xi,
                    y[i].imag() + a.real() * xi + a.imag() * xr);
    }
}

double sum_abs2(const cplx* z, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
    return s;
}

double sum_abs4(const cplx* z, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double m = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
        s += m * m;
    }
    return s;
}

double weighted_abs2(const cplx* z, const double* w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += w[i] * (z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
    return s;
}

double max_abs2(const cplx* z, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        m = std::max(m, z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
    return m;
}

void phase_rotate(cplx* z, double tau, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double a = z[i].real(), b = z[i].imag();
        double th = tau * (a * a + b * b);
        double c = std::cos(th), s = std::sin(th);
        z[i] = cplx(a * c + b * s, b * c - a * s);
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{"scalar",  scale_real,    mul_complex, axpy,        sum_abs2,
                               sum_abs4, weighted_abs2, max_abs2,    phase_rotate};
    return t;
}

}  // namespace spnls::simd
