// Weyl sums with polynomial phases, their exponent functions, certified
// rational approximation of coefficients, and the second-order differencing
// identity.
//
// The central object is F(N) = sum_{n in A(N)} e(psi(n)) for a polynomial
// psi(x) = c_0 + c_1 x + ... + c_k x^k with exactly-specified coefficients.
// Phases are reduced mod 1 in 128-bit fixed point per coefficient, so the
// only uncontrolled error source is a certified decimal input error, which
// is checked up front (PrecisionLoss).
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "subconvex/exactreal.hpp"
#include "subconvex/slice.hpp"

namespace subconvex::weyl {

// Phase polynomial psi(x) = coeffs[0] + coeffs[1] x + ... + coeffs[k] x^k.
struct PolyCoeffs {
    std::vector<exact::Real> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    // zero polynomial of the given degree
    static PolyCoeffs zero(int k);
    // psi(x) = lead * x^k, all lower coefficients zero
    static PolyCoeffs monomial(int k, exact::Real lead);
    // parse a whitespace-separated list of reals, constant term first
    static PolyCoeffs parse(const std::string& text);
    std::string serialize() const;
};

// frac(psi(n)) in 128-bit fixed point. Error <= (k+1) * n^k * 2^-127 from
// quantization (negligible for n^k < 2^80) plus certified input error.
exact::Frac128 phase128(const PolyCoeffs& poly, std::uint64_t n);

// Throws PrecisionLoss if any certified coefficient error e_j satisfies
// e_j * n_max^j > 1/100 — i.e. the stated input uncertainty alone could move
// a phase by more than a hundredth of a cycle at the top of the range.
void check_phase_precision(const PolyCoeffs& poly, std::uint64_t n_max);

// sum_{n in slice} e(psi(n)). |result| <= count.
std::complex<double> restricted_weyl_sum(const sets::IndicatorSlice& slice,
                                         const PolyCoeffs& poly);

// sum_{1 <= n <= N} e(psi(n) + beta*n), the full-interval sum with a linear
// twist.
std::complex<double> full_weyl_sum(std::uint64_t n, const PolyCoeffs& poly,
                                   double beta);

// Exponent functions on k >= 2, 1 <= p < 2 (DomainError outside).
//
//   sigma_p(2) = 1/p - 1/2
//   sigma_p(k) = 2^{1-k}              for k >= 3, 1 <= p <= 4/3
//   sigma_p(k) = 2^{3-k}(1/p - 1/2)   for k >= 3, 4/3 < p < 2
//
//   tau_p(2) = 0
//   tau_p(k) = 1/(k(k-1))                   for p <= (k^2-k)/(k^2-k-1)
//   tau_p(k) = (2/p - 1)/(k^2 - k - 2)      otherwise
//
//   omega_p(k) = max(sigma_p(k), tau_p(k))
double sigma_exponent(int k, double p);
double tau_exponent(int k, double p);
double omega_exponent(int k, double p);

// Certified rational approximation a/q with q <= Q, gcd(a, q) = 1, and
// |alpha - a/q| <= err_bound <= 1/(qQ).
struct RationalApprox {
    mpz_class a;
    mpz_class q;
    mpq_class err_bound;
    bool coprime = true;
};

// Best continued-fraction convergent with denominator <= Q. Requires the
// input's certified error to be below 1/(2Q^2); throws UncertifiableReal
// when the input (or its stated error) cannot support the 1/(qQ) guarantee.
RationalApprox dirichlet_approx(const exact::Real& alpha, const mpz_class& q_cap);

// Envelope N^{1+eps} (1/q + 1/N + q/N^k)^{omega_p(k)}. The approximation
// must satisfy the Dirichlet condition err_bound <= 1/q^2 (InvalidParam);
// DomainError if eps <= 0.
double bound_envelope(int k, double p, std::uint64_t n,
                      const RationalApprox& approx, double epsilon);
// Same value computed entirely in the log domain (cross-check path).
double bound_envelope_log(int k, double p, std::uint64_t n,
                          const RationalApprox& approx, double epsilon);

// One evaluation of the restricted sum against its envelope: the leading
// coefficient is approximated by the best convergent with q <= N^{k/2}
// (recorded in the report), psi = lead * x^k.
struct WeylBoundReport {
    int k = 0;
    double p = 0.0;
    std::uint64_t n = 0;
    mpz_class a, q;
    double epsilon = 0.0;
    double omega = 0.0;
    double envelope = 0.0;
    double observed_abs = 0.0;
    double ratio = 0.0;  // observed_abs / envelope
};

WeylBoundReport weyl_bound_report(const sets::IndicatorSlice& slice, int k,
                                  double p, const exact::Real& lead,
                                  double epsilon);

// Second-order differencing identity at small scale:
//
//   lhs = integral_0^1 |sum_{n<=N} e(psi(n) + beta n)|^4 dbeta
//       = sum_s |sum_{n1+n2=s} e(psi(n1)+psi(n2))|^2     (orthogonality)
//   rhs = sum_{|h1|,|h2|<N} sum_{n in I(h1,h2)} e(Delta2 psi(n; h1, h2))
//
// with Delta2 psi(n;h1,h2) = psi(n+h1+h2) - psi(n+h1) - psi(n+h2) + psi(n)
// and I(h1,h2) = [1 + max(0,-h1,-h2,-h1-h2), N - max(0,h1,h2,h1+h2)].
// gap = |lhs - rhs| must be <= 1e-8 * N^3. ScaleTooLarge for N > 64.
struct DifferencingCheck {
    double lhs = 0.0;
    double rhs = 0.0;  // real part; the imaginary part folds into gap
    double gap = 0.0;
};

DifferencingCheck differencing_identity_check(std::uint64_t n,
                                              const PolyCoeffs& poly);

}  // namespace subconvex::weyl
