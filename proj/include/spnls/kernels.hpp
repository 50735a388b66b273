#pragma once

#include <cstddef>

#include "spnls/aligned.hpp"

// Pointwise loops shared by every module. Each ISA provides one table;
// active() picks the best one the CPU supports. SPNLS_SIMD=scalar forces
// the reference implementation.
namespace spnls::simd {

struct KernelTable {
    const char* name;
    // z[i] *= w[i]
    void (*scale_real)(cplx* z, const double* w, std::size_t n);
    // z[i] *= w[i]
    void (*mul_complex)(cplx* z, const cplx* w, std::size_t n);
    // y[i] += a * x[i]
    void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
    double (*sum_abs2)(const cplx* z, std::size_t n);
    double (*sum_abs4)(const cplx* z, std::size_t n);
    // sum w[i] |z[i]|^2
    double (*weighted_abs2)(const cplx* z, const double* w, std::size_t n);
    double (*max_abs2)(const cplx* z, std::size_t n);
    // z[i] *= exp(-i tau |z[i]|^2)
    void (*phase_rotate)(cplx* z, double tau, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_table();
const KernelTable& active();

}  // namespace spnls::simd
