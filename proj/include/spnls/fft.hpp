#pragma once

#include <span>

#include "spnls/aligned.hpp"

// Unnormalized in-place DFTs over row-major arrays (last index fastest).
// Forward uses e^{-i k x}, backward e^{+i k x}.
namespace spnls::fft {

enum class Direction { Forward, Backward };

void transform(cplx* data, std::span<const int> dims, Direction dir);

// One-dimensional transforms along a single axis of a row-major array.
void transform_axis(cplx* data, std::span<const int> dims, int axis, Direction dir);

}  // namespace spnls::fft
