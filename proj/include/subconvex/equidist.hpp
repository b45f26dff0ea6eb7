// Equidistribution diagnostics for polynomial phases along a set: fractional
// parts of psi at the first M elements, exponential-sum (Weyl-criterion)
// statistics, exact star discrepancy, and the golden-ratio counterexample
// where all fractional parts are trapped in a fixed subinterval.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "subconvex/setexpr.hpp"
#include "subconvex/weyl.hpp"

namespace subconvex::equidist {

// Fractional parts x_n = frac(psi(a_n)) at the first M elements
// a_1 < a_2 < ... of the set.
struct FracSequence {
    std::string source;                  // serialized set expression
    std::string poly;                    // serialized phase polynomial
    std::vector<std::uint64_t> elements; // a_1..a_M
    std::vector<double> values;          // x_1..x_M, each in [0,1)
};

// Materializes the set with a doubling ceiling until it holds M elements;
// SetTooSparse when the ceiling would pass the materialization cap.
FracSequence frac_sequence(const sets::SetExpr& expr,
                           const weyl::PolyCoeffs& poly, std::uint64_t m);

// (1/M) |sum_n e(m x_n)| for m = 1..m_max; each value lies in [0,1].
std::vector<std::pair<int, double>> weyl_criterion_stats(
    const FracSequence& seq, int m_max);

// Exact star discrepancy of points in [0,1):
//   D* = max_i max(i/M - x_(i), x_(i) - (i-1)/M)  over sorted values.
double star_discrepancy(std::vector<double> values);
double star_discrepancy(const FracSequence& seq);

struct EquidistReport {
    std::uint64_t m = 0;                           // sequence length
    std::vector<std::pair<int, double>> weyl_stats; // (m, statistic)
    double star_disc = 0.0;
};

// One report per ladder entry (ascending lengths).
std::vector<EquidistReport> equidist_experiment(
    const sets::SetExpr& expr, const weyl::PolyCoeffs& poly,
    const std::vector<std::uint64_t>& m_ladder, int m_max);

// The trapped-orbit counterexample: with phi the golden ratio, theta = phi-1,
// and a_n the n-th element of the Beatty set {floor(n*phi)}, every frac(a_n
// theta) lies in the open interval (1-theta, 1). Checks the containment for
// the first m terms with exact quadratic-surd comparisons; returns the number
// of violations (0 when the containment holds).
std::uint64_t beatty_counterexample_violations(std::uint64_t m);

}  // namespace subconvex::equidist
