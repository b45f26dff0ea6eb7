#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "subconvex/errors.hpp"

namespace subconvex::exact {

// 128-bit fixed-point fraction in [0,1): value = (hi*2^64 + lo) / 2^128.
// All operations are exact modulo 1, so an initial quantization error eps
// stays bounded by eps * (product of integer multipliers applied).
struct Frac128 {
    std::uint64_t hi = 0, lo = 0;

    // x := frac(x * n)
    void mul_u64(std::uint64_t n) {
        using u128 = unsigned __int128;
        u128 pl = static_cast<u128>(lo) * n;
        u128 ph = static_cast<u128>(hi) * n;
        std::uint64_t carry_lo = static_cast<std::uint64_t>(pl >> 64);
        lo = static_cast<std::uint64_t>(pl);
        hi = static_cast<std::uint64_t>(ph) + carry_lo; // integer part of ph discarded (mod 1)
    }

    // x := frac(x + o)
    void add(const Frac128& o) {
        std::uint64_t l = lo + o.lo;
        std::uint64_t c = (l < lo) ? 1u : 0u;
        lo = l;
        hi = hi + o.hi + c; // overflow = integer carry, discarded
    }

    // x := frac(x - o)
    void sub(const Frac128& o) {
        std::uint64_t borrow = (lo < o.lo) ? 1u : 0u;
        lo = lo - o.lo;
        hi = hi - o.hi - borrow;
    }

    double to_double() const {
        return static_cast<double>(hi) * 0x1p-64 + static_cast<double>(lo) * 0x1p-128;
    }
};

// Closed rational interval [lo, hi] enclosing a real value.
struct Interval {
    mpq_class lo, hi;
    mpq_class width() const { return hi - lo; }
};

// A real number with certified error semantics. Three representations:
//   Rational      p/q                      (exact)
//   Surd          (u + v*sqrt(d))/w        (exact; d > 0 and not a perfect square)
//   Decimal       digit string +/- err     (fixed certification, not refinable)
class Real {
public:
    enum class Kind { Rational, Surd, Decimal };

    static Real rational(mpz_class p, mpz_class q);
    static Real surd(mpz_class u, mpz_class v, mpz_class d, mpz_class w);
    static Real decimal(const std::string& digits, const std::string& err);
    static Real from_double(double x); // exact binary rational
    static Real zero() { return rational(0, 1); }

    Kind kind() const { return kind_; }
    bool refinable() const { return kind_ != Kind::Decimal; }
    // Certified input error (0 for rational/surd, the stated bound for decimal).
    mpq_class cert_err() const { return kind_ == Kind::Decimal ? dec_err_ : mpq_class(0); }

    // Enclosure of width <= 2^-bits for refinable kinds; the fixed stated
    // enclosure for Decimal regardless of `bits`.
    Interval enclose(unsigned bits) const;

    double to_double() const;
    // frac(x) as 128-bit fixed point; quantization error <= 2^-127.
    Frac128 frac128() const;

    // Sign of (x - r), decided exactly (rational/surd) or from the stated
    // enclosure (decimal; throws UncertifiableReal when undecidable).
    int cmp(const mpq_class& r) const;

    std::string serialize() const;

    // Token-stream grammar: "rational P Q" | "surd U V D W" | "decimal DIGITS ERR".
    static Real parse_tokens(const std::vector<std::string>& toks, std::size_t& pos);
    // Whole-string form of the same grammar (trailing tokens are an error).
    static Real parse(const std::string& text);

    // surd accessors (valid when kind()==Surd)
    const mpz_class& su() const { return u_; }
    const mpz_class& sv() const { return v_; }
    const mpz_class& sd() const { return d_; }
    const mpz_class& sw() const { return w_; }
    const mpq_class& rat() const { return rat_; } // valid when kind()==Rational
    const mpq_class& dec_value() const { return dec_val_; }
    const mpq_class& dec_err() const { return dec_err_; }

private:
    Real() = default;
    Kind kind_ = Kind::Rational;
    mpq_class rat_;                  // Rational
    mpz_class u_, v_, d_, w_;        // Surd
    mpq_class dec_val_, dec_err_;    // Decimal
};

// Sum of a rational and surd terms c*sqrt(d) with normalized radicands, plus
// an optional fixed uncertainty (from Decimal parts). Supports the exact
// floor/compare decisions needed by Beatty generation and containment checks.
class LinearForm {
public:
    LinearForm() = default;
    explicit LinearForm(const Real& r, const mpz_class& scale = 1);

    void add_scaled(const Real& r, const mpz_class& scale);
    void add_rational(const mpq_class& r);

    // floor of the value; UncertifiableReal when the uncertainty (or the
    // refinement cap) cannot separate the value from an integer.
    mpz_class floor() const;
    // Sign of (value - r); UncertifiableReal when undecidable.
    int cmp(const mpq_class& r) const;
    // True iff the value is exactly rational (all surd terms cancelled and no
    // decimal part).
    bool is_exact_rational() const { return surds_.empty() && err_ == 0; }
    const mpq_class& rational_part() const { return rat_; }

    Interval enclose(unsigned bits) const;

private:
    mpq_class rat_;
    std::vector<std::pair<mpq_class, mpz_class>> surds_; // coeff * sqrt(radicand)
    mpq_class err_; // symmetric uncertainty radius, 0 unless Decimal involved
};

// floor(alpha*m + beta), exact for rational/surd inputs.
mpz_class floor_linear(const Real& alpha, const mpz_class& m, const Real& beta);

// Fractional part of (u + v*sqrt(d))/w etc. as double (via enclosure).
double frac_double(const Real& x);

// floor(sqrt(n)) helper re-exported for tests.
mpz_class isqrt(const mpz_class& n);

} // namespace subconvex::exact
