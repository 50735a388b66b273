#include <cstdlib>
#include <cstring>

#include "spnls/kernels.hpp"

namespace spnls::simd {

#ifdef SPNLS_HAVE_AVX2
const KernelTable& avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#ifdef SPNLS_HAVE_AVX2
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    if (ok) return &avx2_table_impl();
#endif
    return nullptr;
}

const KernelTable& active() {
    static const KernelTable* chosen = [] {
        const char* env = std::getenv("SPNLS_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_table();
        if (const KernelTable* t = avx2_table()) return t;
        return &scalar_table();
    }();
    return *chosen;
}

}  // namespace spnls::simd
