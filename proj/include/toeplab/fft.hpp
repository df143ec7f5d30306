#pragma once

#include <vector>

#include "toeplab/common.hpp"

namespace toeplab {

// In-place radix-2 FFT, size must be a power of two.  forward computes
// X_k = sum_j x_j e^{-2pi i jk/M}; inverse applies the conjugate transform
// and divides by M.
void fft_forward(std::vector<Complex>& data);
void fft_inverse(std::vector<Complex>& data);

// Continuous argument along a sampled closed curve.  Starts from the
// principal argument of values[0] and accumulates principal differences.
// Throws NumericalError if a step exceeds max_jump (grid too coarse).
std::vector<double> unwrap_phase(const std::vector<Complex>& values,
                                 double max_jump = 2.5);

}  // namespace toeplab
