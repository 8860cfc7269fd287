#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fraclat::detail {

/// In-place d-dimensional complex DFT on a row-major array of shape `dims`.
/// sign = -1 computes sum_x a(x) e^{-2 pi i k.x / n}, sign = +1 the conjugate kernel.
/// No normalisation is applied.
void fft_inplace(std::vector<std::complex<double>>& data, std::span<const int> dims, int sign);

}  // namespace fraclat::detail
