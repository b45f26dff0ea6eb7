#include "subconvex/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "subconvex/parallel.hpp"

namespace subconvex::equidist {

namespace {

// must stay at or below the materialization ceiling in the set module
constexpr std::uint64_t kCeiling = 1ull << 27;

} // namespace

FracSequence frac_sequence(const sets::SetExpr& expr,
                           const weyl::PolyCoeffs& poly, std::uint64_t m) {
    if (m < 1) throw InvalidParam("sequence length must be >= 1");

    std::uint64_t bound = std::max<std::uint64_t>(64, 2 * m);
    sets::IndicatorSlice slice(0);
    for (;;) {
        if (bound > kCeiling)
            throw SetTooSparse("fewer than " + std::to_string(m) +
                               " elements below the materialization cap");
        slice = sets::materialize(expr, bound);
        if (slice.count() >= m) break;
        bound *= 2;
    }

    FracSequence seq;
    seq.source = expr.serialize();
    seq.poly = poly.serialize();
    seq.elements.reserve(m);
    for (std::uint64_t n = 1; n <= slice.n_max() && seq.elements.size() < m; ++n)
        if (slice.test(n)) seq.elements.push_back(n);

    weyl::check_phase_precision(poly, seq.elements.back());
    seq.values.resize(m);
    parallel_for_index(m, [&](std::size_t i) {
        double v = weyl::phase128(poly, seq.elements[i]).to_double();
        if (v >= 1.0) v = 0.0; // guard the closed end of double rounding
        seq.values[i] = v;
    });
    return seq;
}

std::vector<std::pair<int, double>> weyl_criterion_stats(
    const FracSequence& seq, int m_max) {
    if (m_max < 1) throw InvalidParam("need m_max >= 1");
    if (seq.values.empty()) throw InvalidParam("empty sequence");
    const double tau = 2.0 * std::numbers::pi;
    std::vector<std::pair<int, double>> out(static_cast<std::size_t>(m_max));
    parallel_for_index(out.size(), [&](std::size_t i) {
        int m = static_cast<int>(i) + 1;
        double sr = 0.0, si = 0.0;
        for (double x : seq.values) {
            double ph = tau * m * x;
            sr += std::cos(ph);
            si += std::sin(ph);
        }
        out[i] = {m, std::hypot(sr, si) / static_cast<double>(seq.values.size())};
    });
    return out;
}

double star_discrepancy(std::vector<double> values) {
    if (values.empty()) throw InvalidParam("empty sequence");
    std::sort(values.begin(), values.end());
    const double m = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double up = static_cast<double>(i + 1) / m - values[i];
        double down = values[i] - static_cast<double>(i) / m;
        d = std::max({d, up, down});
    }
    return d;
}

double star_discrepancy(const FracSequence& seq) {
    return star_discrepancy(seq.values);
}

std::vector<EquidistReport> equidist_experiment(
    const sets::SetExpr& expr, const weyl::PolyCoeffs& poly,
    const std::vector<std::uint64_t>& m_ladder, int m_max) {
    for (std::size_t i = 1; i < m_ladder.size(); ++i)
        if (m_ladder[i] <= m_ladder[i - 1])
            throw InvalidParam("length ladder must be strictly ascending");
    std::vector<EquidistReport> out(m_ladder.size());
    // ladder points materialize independently; inner loops parallelize
    for (std::size_t i = 0; i < m_ladder.size(); ++i) {
        FracSequence seq = frac_sequence(expr, poly, m_ladder[i]);
        out[i].m = m_ladder[i];
        out[i].weyl_stats = weyl_criterion_stats(seq, m_max);
        out[i].star_disc = star_discrepancy(seq);
    }
    return out;
}

std::uint64_t beatty_counterexample_violations(std::uint64_t m) {
    if (m < 1) throw InvalidParam("need at least one term");
    // phi = (1+sqrt5)/2, theta = phi-1 = (-1+sqrt5)/2
    exact::Real phi = exact::Real::surd(1, 1, 5, 2);
    exact::Real theta = exact::Real::surd(-1, 1, 5, 2);
    sets::SetExpr expr = sets::SetExpr::beatty(phi, exact::Real::zero());

    std::uint64_t bound = std::max<std::uint64_t>(64, 2 * m);
    sets::IndicatorSlice slice(0);
    for (;;) {
        if (bound > kCeiling)
            throw SetTooSparse("counterexample set ran past the cap");
        slice = sets::materialize(expr, bound);
        if (slice.count() >= m) break;
        bound *= 2;
    }

    std::uint64_t seen = 0, violations = 0;
    for (std::uint64_t a = 1; a <= slice.n_max() && seen < m; ++a) {
        if (!slice.test(a)) continue;
        ++seen;
        // frac(a*theta) in (1-theta, 1), exactly:
        //   upper end: frac < 1 always;
        //   lower end: a*theta - floor(a*theta) > 1 - theta
        //          <=> (a+1)*theta > floor(a*theta) + 1.
        mpz_class fl = exact::floor_linear(theta, a, exact::Real::zero());
        exact::LinearForm g(theta, mpz_class(a) + 1);
        if (g.cmp(mpq_class(fl + 1)) <= 0) ++violations;
    }
    return violations;
}

} // namespace subconvex::equidist
