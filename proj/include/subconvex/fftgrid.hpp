#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "subconvex/slice.hpp"

namespace subconvex::fft {

// |f(j/M)| for j = 0..M/2, where f(x) = sum_{n in slice} e(n x).
// Conjugate symmetry gives the upper half of the grid. M must be a power of
// two with M >= 2*(n_max+1) so the zero-padded transform is well formed.
std::vector<double> abs_grid(const sets::IndicatorSlice& slice, std::size_t m);

// f(j/M) for j = 0..M-1 with f(x) = sum_{n=1..N} w[n-1] e(n x)
// (positive-frequency convention; arbitrary complex weights).
std::vector<std::complex<double>>
value_grid(const std::vector<std::complex<double>>& weights, std::size_t m);

// X_a = sum_c w[c] e(a c / q) for a = 0..q-1 (length-q transform, any q >= 1).
std::vector<std::complex<double>>
dft_pos(const std::vector<std::complex<double>>& w);

} // namespace subconvex::fft
