#include "subconvex/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "subconvex/fftgrid.hpp"
#include "subconvex/parallel.hpp"

namespace subconvex::moments {

namespace {

// Below this modulus a grid value contributes 0: |f|^p = exp(p log|f|)
// underflows anyway and log(0) must never be formed.
constexpr double kTinyAbs = 1e-30;

double pow_abs(double v, double p) {
    if (v < kTinyAbs) return 0.0;
    return std::pow(v, p);
}

void check_p(double p) {
    if (!(p > 0.0) || p > 4.0)
        throw DomainError("moment exponent must lie in (0, 4]");
}

// (1/M) sum_{j=0}^{M-1} g[j*stride]^p where g holds |f| on the half grid
// j = 0..M/2 (conjugate symmetry supplies the rest). Kahan-compensated.
double grid_mean_pow(const std::vector<double>& g, std::uint64_t m, double p,
                     std::size_t stride) {
    double s = pow_abs(g[0], p) + pow_abs(g[(m / 2) * stride], p);
    double c = 0.0;
    for (std::uint64_t j = 1; j < m / 2; ++j) {
        double y = 2.0 * pow_abs(g[j * stride], p) - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s / static_cast<double>(m);
}

std::uint64_t default_grid(std::uint64_t n) {
    std::uint64_t m = 64;
    while (m < 32 * std::max<std::uint64_t>(n, 1)) m <<= 1;
    return m;
}

} // namespace

std::complex<double> exp_sum_at(const sets::IndicatorSlice& slice, double alpha) {
    const double tau = 2.0 * std::numbers::pi;
    double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0; // sums + Kahan carries
    for (std::uint64_t n = 1; n <= slice.n_max(); ++n) {
        if (!slice.test(n)) continue;
        double ph = std::fmod(static_cast<double>(n) * alpha, 1.0);
        double x = std::cos(tau * ph);
        double y = std::sin(tau * ph);
        double yr = x - cr, tr = sr + yr;
        cr = (tr - sr) - yr;
        sr = tr;
        double yi = y - ci, ti = si + yi;
        ci = (ti - si) - yi;
        si = ti;
    }
    return {sr, si};
}

MomentEstimate moment_lp(const sets::IndicatorSlice& slice, double p,
                         std::uint64_t grid) {
    check_p(p);
    const std::uint64_t n = slice.n_max();
    std::uint64_t m = grid ? grid : default_grid(n);
    if (m == 0 || (m & (m - 1)) != 0)
        throw InvalidParam("grid size must be a power of two");
    if (m < 4 * n)
        throw GridTooCoarse("grid " + std::to_string(m) + " below 4*N = " +
                            std::to_string(4 * n));
    std::vector<double> g = fft::abs_grid(slice, m);

    MomentEstimate est;
    est.p = p;
    est.n = n;
    est.grid = m;
    est.below_theory_range = p < 1.0;
    est.value = grid_mean_pow(g, m, p, 1);
    // the even-index entries of g are exactly the M/2 grid
    est.refinement_delta = std::abs(est.value - grid_mean_pow(g, m / 2, p, 2));
    return est;
}

std::vector<std::uint64_t> residue_counts(const sets::IndicatorSlice& slice,
                                          std::uint64_t q) {
    if (q < 1) throw InvalidParam("modulus must be positive");
    std::vector<std::uint64_t> counts(q, 0);
    for (std::uint64_t n = 1; n <= slice.n_max(); ++n)
        if (slice.test(n)) ++counts[n % q];
    return counts;
}

double discrete_moment(const sets::IndicatorSlice& slice, double p,
                       std::uint64_t q) {
    check_p(p);
    if (q < 1) throw InvalidParam("denominator must be positive");
    if (q > (1ull << 24))
        throw ResourceLimit("denominator too large for a dense transform");

    std::vector<std::uint64_t> counts = residue_counts(slice, q);
    std::vector<std::complex<double>> w(q);
    for (std::uint64_t c = 0; c < q; ++c)
        w[c] = static_cast<double>(counts[c]);
    // X[a] = sum_c counts[c] e(ac/q) = f(a/q)
    std::vector<std::complex<double>> x = fft::dft_pos(w);

    // a = q is the same point as a = 0: f(1) = A(N) exactly
    double s = pow_abs(static_cast<double>(slice.count()), p);
    double comp = 0.0;
    for (std::uint64_t a = 1; a < q; ++a) {
        double y = pow_abs(std::abs(x[a]), p) - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s / static_cast<double>(q);
}

SlopeFit subconvexity_fit(const sets::SetExpr& expr, double p,
                          const std::vector<std::uint64_t>& scales,
                          std::uint64_t grid) {
    check_p(p);
    if (scales.size() < 4)
        throw DomainError("slope fit needs at least 4 ladder points");

    SlopeFit fit;
    fit.p = p;
    fit.points.resize(scales.size());
    parallel_for_index(scales.size(), [&](std::size_t i) {
        sets::IndicatorSlice slice = sets::materialize(expr, scales[i]);
        MomentEstimate est = moment_lp(slice, p, grid);
        MomentFitPoint& pt = fit.points[i];
        pt.n = scales[i];
        pt.count = slice.count();
        pt.value = est.value;
        pt.ratio = pt.count == 0
                       ? 0.0
                       : est.value * static_cast<double>(pt.n) /
                             std::pow(static_cast<double>(pt.count), p);
    });

    // least squares on (log N, log I_p)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(fit.points.size());
    for (const MomentFitPoint& pt : fit.points) {
        if (!(pt.value > 0.0))
            throw DomainError("moment vanished; log-log fit undefined");
        double x = std::log(static_cast<double>(pt.n));
        double y = std::log(pt.value);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double denom = k * sxx - sx * sx;
    if (!(denom > 0.0)) throw DomainError("degenerate ladder for slope fit");
    fit.slope = (k * sxy - sx * sy) / denom;
    double intercept = (sy - fit.slope * sx) / k;
    double rss = 0;
    for (const MomentFitPoint& pt : fit.points) {
        double r = std::log(pt.value) -
                   (intercept + fit.slope * std::log(static_cast<double>(pt.n)));
        rss += r * r;
    }
    fit.residual_rms = std::sqrt(rss / k);
    return fit;
}

double moment_floor(std::uint64_t count, double p, std::uint64_t n) {
    if (n == 0) return 0.0;
    return std::pow(static_cast<double>(count) / 2.0, p) /
           (100.0 * static_cast<double>(n));
}

LittlewoodCheck littlewood_floor_check(const sets::IndicatorSlice& slice,
                                       std::uint64_t grid) {
    if (slice.count() < 2)
        throw DomainError("first-moment floor needs at least two elements");
    LittlewoodCheck chk;
    chk.i1 = moment_lp(slice, 1.0, grid);
    chk.log_count = std::log(static_cast<double>(slice.count()));
    chk.ratio = chk.i1.value / chk.log_count;
    return chk;
}

} // namespace subconvex::moments
