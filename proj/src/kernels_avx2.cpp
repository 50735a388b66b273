#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "spnls/kernels.hpp"

namespace spnls::simd {
namespace {

inline double* dp(cplx* z) { return reinterpret_cast<double*>(z); }
inline const double* dp(const cplx* z) { return reinterpret_cast<const double*>(z); }

// (a+ib)(c+id) for two interleaved complex numbers per register.
inline __m256d cmul(__m256d z, __m256d w) {
    __m256d wr = _mm256_movedup_pd(w);
    __m256d wi = _mm256_permute_pd(w, 0xF);
    __m256d zs = _mm256_permute_pd(z, 0x5);
    return _mm256_fmaddsub_pd(z, wr, _mm256_mul_pd(zs, wi));
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// |z|^2 of four consecutive complex numbers, in order.
inline __m256d abs2x4(__m256d z01, __m256d z23) {
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(z01, z01), _mm256_mul_pd(z23, z23));
    return _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0));
}

// Cephes-style sin/cos with three-part Cody-Waite reduction, valid for |x| < 1e7.
inline void sincos4(__m256d x, __m256d& s, __m256d& c) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d fopi = _mm256_set1_pd(1.27323954473516268615);
    const __m256d dp1 = _mm256_set1_pd(7.85398125648498535156E-1);
    const __m256d dp2 = _mm256_set1_pd(3.77489470793079817668E-8);
    const __m256d dp3 = _mm256_set1_pd(2.69515142907905952645E-15);

    __m256d ax = _mm256_andnot_pd(sign, x);
    __m256d xsign = _mm256_and_pd(sign, x);
    __m128i j = _mm256_cvttpd_epi32(_mm256_mul_pd(ax, fopi));
    j = _mm_and_si128(_mm_add_epi32(j, _mm_set1_epi32(1)), _mm_set1_epi32(~1));
    __m256d y = _mm256_cvtepi32_pd(j);
    __m128i q = _mm_and_si128(j, _mm_set1_epi32(7));
    __m128i two = _mm_set1_epi32(2), four = _mm_set1_epi32(4);
    __m256d swap = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm_cmpeq_epi32(_mm_and_si128(q, two), two)));
    __m256d negs = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm_cmpeq_epi32(_mm_and_si128(q, four), four)));
    __m256d negc = _mm256_castsi256_pd(
        _mm256_cvtepi32_epi64(_mm_cmpeq_epi32(_mm_and_si128(_mm_add_epi32(q, two), four), four)));

    __m256d z = _mm256_fnmadd_pd(y, dp1, ax);
    z = _mm256_fnmadd_pd(y, dp2, z);
    z = _mm256_fnmadd_pd(y, dp3, z);
    __m256d zz = _mm256_mul_pd(z, z);

    __m256d ps = _mm256_set1_pd(1.58962301576546568060E-10);
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-2.50507477628578072866E-8));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(2.75573136213857245213E-6));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-1.98412698295895385996E-4));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(8.33333333332211858878E-3));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-1.66666666666666307295E-1));
    ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), ps, z);

    __m256d pc = _mm256_set1_pd(-1.13585365213876817300E-11);
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(2.08757008419747316778E-9));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(-2.75573141792967388112E-7));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(2.48015872888517045348E-5));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(-1.38888888888730564116E-3));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(4.16666666666665929218E-2));
    pc = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), pc, _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));

    s = _mm256_blendv_pd(ps, pc, swap);
    c = _mm256_blendv_pd(pc, ps, swap);
    s = _mm256_xor_pd(s, _mm256_and_pd(negs, sign));
    s = _mm256_xor_pd(s, xsign);
    c = _mm256_xor_pd(c, _mm256_and_pd(negc, sign));
}

void scale_real(cplx* z, const double* w, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d wv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i)), _MM_SHUFFLE(1, 1, 0, 0));
        _mm256_storeu_pd(dp(z + i), _mm256_mul_pd(_mm256_loadu_pd(dp(z + i)), wv));
    }
    for (; i < n; ++i) z[i] *= w[i];
}

void mul_complex(cplx* z, const cplx* w, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        _mm256_storeu_pd(dp(z + i), cmul(_mm256_loadu_pd(dp(z + i)), _mm256_loadu_pd(dp(w + i))));
    for (; i < n; ++i) {
        double a = z[i].real(), b = z[i].imag(), c = w[i].real(), d = w[i].imag();
        z[i] = cplx(a * c - b * d, a * d + b * c);
    }
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
    __m256d av = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        _mm256_storeu_pd(dp(y + i), _mm256_add_pd(_mm256_loadu_pd(dp(y + i)), cmul(_mm256_loadu_pd(dp(x + i)), av)));
    for (; i < n; ++i) {
        double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + a.real() * xr - a.imag() * xi, y[i].imag() + a.real() * xi + a.imag() * xr);
    }
}

double sum_abs2(const cplx* z, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(dp(z + i)), b = _mm256_loadu_pd(dp(z + i + 2));
        acc0 = _mm256_fmadd_pd(a, a, acc0);
        acc1 = _mm256_fmadd_pd(b, b, acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
    return s;
}

double sum_abs4(const cplx* z, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d m = abs2x4(_mm256_loadu_pd(dp(z + i)), _mm256_loadu_pd(dp(z + i + 2)));
        acc = _mm256_fmadd_pd(m, m, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        double m = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
        s += m * m;
    }
    return s;
}

double weighted_abs2(const cplx* z, const double* w, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d m = abs2x4(_mm256_loadu_pd(dp(z + i)), _mm256_loadu_pd(dp(z + i + 2)));
        acc = _mm256_fmadd_pd(m, _mm256_loadu_pd(w + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * (z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
    return s;
}

double max_abs2(const cplx* z, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, abs2x4(_mm256_loadu_pd(dp(z + i)), _mm256_loadu_pd(dp(z + i + 2))));
    double m = hmax(acc);
    for (; i < n; ++i) m = std::max(m, z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
    return m;
}

void rotate_scalar(cplx* z, double tau, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double a = z[i].real(), b = z[i].imag();
        double th = tau * (a * a + b * b);
        double c = std::cos(th), s = std::sin(th);
        z[i] = cplx(a * c + b * s, b * c - a * s);
    }
}

void phase_rotate(cplx* z, double tau, std::size_t n) {
    const __m256d tv = _mm256_set1_pd(tau);
    const __m256d limit = _mm256_set1_pd(1e7);
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d z01 = _mm256_loadu_pd(dp(z + i)), z23 = _mm256_loadu_pd(dp(z + i + 2));
        __m256d th = _mm256_mul_pd(abs2x4(z01, z23), tv);
        // NaN or huge arguments go through the libm path.
        if (_mm256_movemask_pd(_mm256_cmp_pd(_mm256_andnot_pd(sign, th), limit, _CMP_LT_OQ)) != 0xF) {
            rotate_scalar(z + i, tau, 4);
            continue;
        }
        __m256d s, c;
        sincos4(th, s, c);
        __m256d ns = _mm256_xor_pd(s, sign);
        __m256d lo = _mm256_unpacklo_pd(c, ns), hi = _mm256_unpackhi_pd(c, ns);
        __m256d w01 = _mm256_permute2f128_pd(lo, hi, 0x20), w23 = _mm256_permute2f128_pd(lo, hi, 0x31);
        _mm256_storeu_pd(dp(z + i), cmul(z01, w01));
        _mm256_storeu_pd(dp(z + i + 2), cmul(z23, w23));
    }
    rotate_scalar(z + i, tau, n - i);
}

}  // namespace

const KernelTable& avx2_table_impl() {
    static const KernelTable t{"avx2",   scale_real,    mul_complex, axpy,        sum_abs2,
                               sum_abs4, weighted_abs2, max_abs2,    phase_rotate};
    return t;
}

}  // namespace spnls::simd
