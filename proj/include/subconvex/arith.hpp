// Arithmetic functions over [1, N]: sieves for the Mobius and von Mangoldt
// functions, discriminant cusp-form coefficients, Dirichlet characters with
// Gauss sums, normalized exponential-sum norms H_f, restricted averages, and
// the exact three-factor Hoelder inequality that controls them.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "subconvex/exactreal.hpp"
#include "subconvex/slice.hpp"

namespace subconvex::arith {

// --------------------------------------------------------------------------
// sieved tables

// Table of length n+1 with t[m] = mu(m) for 1 <= m <= n (slot 0 unused).
// ResourceLimit above the memory ceiling.
std::vector<int> mobius_table(std::uint64_t n);

// Table of length n+1 with t[m] = Lambda(m): log p at prime powers p^k,
// 0 elsewhere (slot 0 unused).
std::vector<double> mangoldt_table(std::uint64_t n);

// Coefficients of the weight-12 discriminant form: t[n-1] is the n-th
// coefficient of q * prod_{j>=1} (1 - q^j)^24, computed exactly (t[0] = 1,
// t[1] = -24). Capped at n <= 4096 (ResourceLimit): the exact integer
// coefficients grow past 64 bits well before that.
std::vector<mpz_class> cusp_tau_table(std::uint64_t n);

// --------------------------------------------------------------------------
// Dirichlet characters mod a prime

struct DirichletChar {
    std::uint64_t q = 0;  // prime modulus
    std::uint64_t t = 0;  // character index in 0..q-2 (0 = principal)
    std::uint64_t g = 0;  // the primitive root generating the index table
    std::vector<std::uint64_t> ind;  // ind[r] for r = 1..q-1: g^ind[r] = r (mod q)

    bool principal() const { return t == 0; }
    // chi(n): e(t * ind[n mod q] / (q-1)), and 0 when q | n.
    std::complex<double> value(std::uint64_t n) const;
};

// Builds the character table; NotPrime if q is not prime. Index t must lie
// in [0, q-2] (InvalidParam outside).
DirichletChar dirichlet_char(std::uint64_t q, std::uint64_t t);

// T(a) = sum_{m=1}^{q} chi(m) e(m a / q). |T(a)| = sqrt(q) whenever
// gcd(a, q) = 1 (prime modulus makes every non-principal character
// primitive). PrincipalChar for the principal character.
std::complex<double> gauss_sum(const DirichletChar& chi, long long a);

// --------------------------------------------------------------------------
// weighted exponential sums H_f(x) = (1/N) sum_n f(n) e(n x)

// An arithmetic function materialized over [1, N].
struct ArithFn {
    std::string label;                          // CSV identifier
    std::vector<std::complex<double>> values;   // values[n-1] = f(n)

    std::uint64_t n_max() const { return values.size(); }
};

ArithFn make_one(std::uint64_t n);
ArithFn make_mobius(std::uint64_t n);
ArithFn make_mangoldt(std::uint64_t n);
ArithFn make_cusp_tau(std::uint64_t n);
// mu(n) e(n^k theta) and Lambda(n) e(n^k theta)
ArithFn make_mobius_phase(std::uint64_t n, int k, const exact::Real& theta);
ArithFn make_mangoldt_phase(std::uint64_t n, int k, const exact::Real& theta);
ArithFn make_char_twist(std::uint64_t n, const DirichletChar& chi);
ArithFn make_explicit(std::vector<std::complex<double>> values,
                      std::string label);

// Grammar for the CLI --fn flag:
//   one | mobius | mangoldt | cusptau
//   mobius-phase K <real> | mangoldt-phase K <real> | char Q T
ArithFn parse_fn(const std::string& text, std::uint64_t n);

struct HfNorms {
    double sup_norm = 0.0;     // max_j |H_f(j/M)|: certified lower bound of sup
    double sup_alpha = 0.0;    // grid point attaining the maximum
    double refinement_delta = 0.0;  // sup(M) - sup(M/2), always >= 0
    double l2_norm = 0.0;      // ((1/N) sum |f(n)|^2)^(1/2), exact
    double l1_over_n = 0.0;    // (1/N) sum |f(n)|: trivial upper bound of sup
    std::uint64_t grid = 0;
};

// Norms of H_f on a power-of-two grid. grid = 0 picks 2^ceil(log2(32 N));
// an explicit grid below 32 N is GridTooCoarse.
HfNorms hf_norms(const ArithFn& f, std::uint64_t grid = 0);

// (1/N) sum_{n in slice} f(n), N = slice bound. LengthMismatch unless f is
// materialized to exactly that bound.
std::complex<double> restricted_average(const ArithFn& f,
                                        const sets::IndicatorSlice& slice);

// The exact inequality behind the restricted-average bound: with
// H = H_f on the grid and S(x) = sum_{n in slice} e(nx),
//
//   |(1/N) sum_{n in slice} f(n)|
//     <= (sup|H|)^{2/p-1} ((1/M) sum |H|^2)^{1-1/p} ((1/M) sum |S|^p)^{1/p}
//
// holds for every f, slice and p in [1,2) because the left side equals the
// grid pairing of H against S exactly (the grid is finer than twice the
// bandwidth). slack = rhs - lhs must be >= -1e-9.
struct HolderCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
};

HolderCheck holder_chain_check(const ArithFn& f,
                               const sets::IndicatorSlice& slice, double p,
                               std::uint64_t grid = 0);

// Character sum over a slice with its square-root-cancellation envelope
// q^{1/2} N^{1-1/p} (1 + N/q)^{1/p}; PrincipalChar for t = 0.
struct CharSumReport {
    std::complex<double> sum;
    double envelope = 0.0;
    double ratio = 0.0;  // |sum| / envelope
};

CharSumReport restricted_char_sum(const DirichletChar& chi,
                                  const sets::IndicatorSlice& slice, double p);

// Minor-arc predicate at scale N with log-power exponent a_exp: true when
// the best rational approximation to theta with denominator at most
// N * log^{a_exp}(2N) already needs a denominator above log^{a_exp}(2N).
// Experiments on phase-twisted functions skip theta failing this.
bool minor_arc_theta(const exact::Real& theta, std::uint64_t n, double a_exp);

}  // namespace subconvex::arith
