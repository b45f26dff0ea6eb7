// L^p moments of exponential sums over integer sets.
//
// For a set slice A(N) let f(x) = sum_{n in A(N)} e(nx), e(x) = exp(2 pi i x).
// This module estimates the continuous moment
//
//     I_p(N) = integral_0^1 |f(x)|^p dx
//
// by uniform quadrature on an FFT grid of M points (exact for p = 2 by
// orthogonality), computes the discrete analogue
//
//     S_p(N; q) = (1/q) sum_{a=1}^{q} |f(a/q)|^p
//
// exactly via a residue-class histogram plus a length-q DFT, fits growth
// exponents across a ladder of scales, and checks the log A(N) lower bound
// for the first moment.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "subconvex/setexpr.hpp"
#include "subconvex/slice.hpp"

namespace subconvex::moments {

// One quadrature estimate of I_p(N).
struct MomentEstimate {
  double p = 0.0;            // moment exponent
  std::uint64_t n = 0;       // scale N (set truncated to [1, N])
  std::uint64_t grid = 0;    // FFT grid size M actually used
  double value = 0.0;        // (1/M) sum_j |f(j/M)|^p
  double refinement_delta = 0.0;  // |value - value on the M/2 subgrid|
  bool below_theory_range = false;  // p < 1: computed, but outside the range
                                    // the moment bounds address
};

// Least-squares fit of log I_p against log N across a ladder.
struct MomentFitPoint {
  std::uint64_t n = 0;
  std::uint64_t count = 0;   // A(N)
  double value = 0.0;        // I_p estimate at this N
  double ratio = 0.0;        // I_p / (A(N)^p / N); bounded iff the scan sees
                             // square-root-cancellation behaviour
};

struct SlopeFit {
  double p = 0.0;
  double slope = 0.0;        // d log I_p / d log N
  double residual_rms = 0.0; // RMS residual of the linear fit in log-log
  std::vector<MomentFitPoint> points;
};

// First-moment lower-bound check: I_1 against log A(N).
struct LittlewoodCheck {
  MomentEstimate i1;         // quadrature estimate of I_1
  double log_count = 0.0;    // ln A(N)
  double ratio = 0.0;        // i1.value / log_count
};

// f(alpha) for the slice, by direct compensated summation. O(N) per call.
std::complex<double> exp_sum_at(const sets::IndicatorSlice& slice, double alpha);

// Quadrature estimate of I_p(N).
//
// grid = 0 picks M = 2^ceil(log2(32 N)) (and at least 64). An explicit grid
// must be a power of two; GridTooCoarse if grid < 4 N. p must lie in (0, 4];
// p < 1 is computed but flagged below_theory_range.
MomentEstimate moment_lp(const sets::IndicatorSlice& slice, double p,
                         std::uint64_t grid = 0);

// Residue-class histogram: counts[c] = #{n in slice : n = c (mod q)}.
std::vector<std::uint64_t> residue_counts(const sets::IndicatorSlice& slice,
                                          std::uint64_t q);

// Discrete moment S_p(N; q). The values f(a/q) depend on the set only
// through its residue counts mod q, which one length-q DFT turns into all q
// sum values at once: O(N + q log q). Any q >= 1.
double discrete_moment(const sets::IndicatorSlice& slice, double p,
                       std::uint64_t q);

// Fit log I_p vs log N over the given scales (needs >= 4 points, else
// DomainError). Each scale materializes the expression afresh.
SlopeFit subconvexity_fit(const sets::SetExpr& expr, double p,
                          const std::vector<std::uint64_t>& scales,
                          std::uint64_t grid = 0);

// The universal quadrature floor (A/2)^p / (100 N): every moment estimate
// must dominate it (the near-zero grid points alone contribute this much).
double moment_floor(std::uint64_t count, double p, std::uint64_t n);

// I_1 versus ln A(N). DomainError if A(N) < 2 (the bound is vacuous there).
LittlewoodCheck littlewood_floor_check(const sets::IndicatorSlice& slice,
                                       std::uint64_t grid = 0);

}  // namespace subconvex::moments
