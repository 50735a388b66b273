#pragma once

#include <cstddef>
#include <functional>

namespace spnls {

// Worker count: SPNLS_THREADS if set, otherwise hardware concurrency.
int thread_count();

// Runs fn(i) for i in [0, n). Each index is visited exactly once; callers
// write results into preallocated slots so output is order independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace spnls
