#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "subconvex/errors.hpp"
#include "subconvex/setexpr.hpp"
#include "subconvex/weyl.hpp"

using namespace subconvex;
using exact::Real;
using weyl::PolyCoeffs;

TEST_CASE("polynomial parsing and canonical text") {
    PolyCoeffs p = PolyCoeffs::parse("0 0 surd 0 1 2 1");
    CHECK(p.degree() == 2);
    PolyCoeffs back = PolyCoeffs::parse(p.serialize());
    CHECK(back.serialize() == p.serialize());

    CHECK(PolyCoeffs::zero(3).degree() == 3);
    CHECK(PolyCoeffs::monomial(4, Real::rational(1, 3)).degree() == 4);
    CHECK_THROWS_AS(PolyCoeffs::parse("5"), InvalidParam);  // constant only
    CHECK_THROWS_AS(PolyCoeffs::parse(""), InvalidParam);
}

TEST_CASE("128-bit phases match double arithmetic away from wraparound") {
    PolyCoeffs p = PolyCoeffs::parse("1/7 1/3 2/5");
    for (std::uint64_t n : {1ull, 2ull, 10ull, 97ull}) {
        double want = 1.0 / 7 + n / 3.0 + n * double(n) * 2 / 5;
        want -= std::floor(want);
        CHECK(weyl::phase128(p, n).to_double() ==
              doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("phases of exact rationals reduce exactly at huge arguments") {
    // psi(n) = n^3 / 3: phase at n = 3k is exactly an integer multiple of 9k^3
    PolyCoeffs p = PolyCoeffs::monomial(3, Real::rational(1, 3));
    for (std::uint64_t n : {3ull, 300ull, 3000000ull}) {
        double v = weyl::phase128(p, n).to_double();
        if (v > 0.5) v -= 1.0;
        CHECK(std::abs(v) < 1e-25);  // would be hopeless in double arithmetic
    }
}

TEST_CASE("precision guard rejects decimals whose error swamps the phase") {
    PolyCoeffs sloppy;
    sloppy.coeffs = {Real::zero(), Real::zero(),
                     Real::decimal("1.414213", "0.000001")};
    // err * n^2 at n = 10^4 is 100 > 1/100
    CHECK_THROWS_AS(weyl::check_phase_precision(sloppy, 10000), PrecisionLoss);
    // at n = 30 the same coefficient is fine: 9e-4 < 1/100
    weyl::check_phase_precision(sloppy, 30);
    // exact inputs never trip the guard
    weyl::check_phase_precision(
        PolyCoeffs::monomial(4, Real::surd(0, 1, 2, 1)), 1 << 20);
}

TEST_CASE("restricted and full sums agree on the full interval") {
    sets::IndicatorSlice all = sets::materialize(sets::SetExpr::naturals(), 1000);
    PolyCoeffs p = PolyCoeffs::parse("0 0 surd 0 1 2 1");
    std::complex<double> a = weyl::restricted_weyl_sum(all, p);
    std::complex<double> b = weyl::full_weyl_sum(1000, p, 0.0);
    CHECK(std::abs(a - b) <= 1e-10 * (1 + std::abs(b)));
}

TEST_CASE("full sum degenerate values") {
    CHECK(std::abs(weyl::full_weyl_sum(10, PolyCoeffs::zero(2), 0.0) -
                   std::complex<double>(10, 0)) < 1e-12);
    CHECK(std::abs(weyl::full_weyl_sum(2, PolyCoeffs::zero(2), 0.5)) < 1e-12);
}

TEST_CASE("linear twist folds into the linear coefficient") {
    // beta = 1/4 is dyadic, so adding it to a dyadic alpha_1 is exact
    PolyCoeffs p = PolyCoeffs::parse("0 1/8 surd 0 1 3 1");
    PolyCoeffs q = PolyCoeffs::parse("0 3/8 surd 0 1 3 1");
    std::complex<double> a = weyl::full_weyl_sum(500, p, 0.25);
    std::complex<double> b = weyl::full_weyl_sum(500, q, 0.0);
    CHECK(std::abs(a - b) <= 1e-10 * (1 + std::abs(b)));
}

TEST_CASE("exponent functions: closed-form branch values") {
    // quadratic branch
    CHECK(weyl::sigma_exponent(2, 4.0 / 3.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(weyl::tau_exponent(2, 1.0) == 0.0);
    CHECK(weyl::tau_exponent(2, 1.9) == 0.0);
    // cubic
    CHECK(weyl::sigma_exponent(3, 4.0 / 3.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(weyl::tau_exponent(3, 1.0) == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(weyl::tau_exponent(3, 1.5) == doctest::Approx(1.0 / 12).epsilon(1e-15));
    // quartic
    CHECK(weyl::sigma_exponent(4, 1.5) == doctest::Approx(1.0 / 12).epsilon(1e-15));
    // degree 10 at p = 1: the tau branch dominates
    CHECK(weyl::omega_exponent(10, 1.0) == doctest::Approx(1.0 / 90).epsilon(1e-15));
    CHECK(weyl::sigma_exponent(10, 1.0) == doctest::Approx(std::ldexp(1.0, -9)));
}

TEST_CASE("exponent functions: continuity, range and domain errors") {
    for (int k = 2; k <= 12; ++k) {
        // continuity of sigma at p = 4/3
        double left = weyl::sigma_exponent(k, 4.0 / 3.0);
        double right = weyl::sigma_exponent(k, 4.0 / 3.0 + 1e-12);
        CHECK(std::abs(left - right) < 1e-9);
        // tau continuity at its threshold
        double thr = (double(k) * k - k) / (double(k) * k - k - 1);
        if (thr < 2) {
            CHECK(std::abs(weyl::tau_exponent(k, thr - 1e-12) -
                           weyl::tau_exponent(k, thr + 1e-12)) < 1e-9);
        }
        for (double p : {1.0, 1.2, 4.0 / 3.0, 1.5, 1.8, 1.99}) {
            double om = weyl::omega_exponent(k, p);
            CHECK(om >= 0.0);
            CHECK(om <= 0.5);
            CHECK(om == std::max(weyl::sigma_exponent(k, p),
                                 weyl::tau_exponent(k, p)));
        }
    }
    CHECK_THROWS_AS(weyl::sigma_exponent(1, 1.5), DomainError);
    CHECK_THROWS_AS(weyl::sigma_exponent(2, 0.9), DomainError);
    CHECK_THROWS_AS(weyl::sigma_exponent(2, 2.0), DomainError);
    CHECK_THROWS_AS(weyl::omega_exponent(3, 2.5), DomainError);
}

TEST_CASE("rational approximation: known convergents") {
    weyl::RationalApprox a =
        weyl::dirichlet_approx(Real::rational(1, 3), mpz_class(10));
    CHECK(a.a == 1);
    CHECK(a.q == 3);
    CHECK(a.err_bound == 0);

    weyl::RationalApprox b =
        weyl::dirichlet_approx(Real::surd(0, 1, 2, 1), mpz_class(100));
    CHECK(b.a == 99);
    CHECK(b.q == 70);

    weyl::RationalApprox c =
        weyl::dirichlet_approx(Real::surd(1, 1, 5, 2), mpz_class(12));
    CHECK(c.a == 13);
    CHECK(c.q == 8);
}

TEST_CASE("rational approximation: certified Dirichlet quality") {
    std::mt19937_64 rng(1212);
    std::vector<Real> alphas = {
        Real::surd(0, 1, 2, 1), Real::surd(0, 1, 3, 1), Real::surd(1, 1, 5, 2),
        Real::rational(355, 113), Real::rational(-22, 7)};
    for (int t = 0; t < 30; ++t) {
        long num = long(rng() % 20000) - 10000, den = 1 + long(rng() % 999);
        alphas.push_back(Real::rational(num, den));
    }
    for (const Real& alpha : alphas) {
        for (long cap : {5L, 17L, 100L, 1000L}) {
            weyl::RationalApprox ap = weyl::dirichlet_approx(alpha, mpz_class(cap));
            CHECK(ap.q >= 1);
            CHECK(ap.q <= cap);
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), ap.a.get_mpz_t(), ap.q.get_mpz_t());
            CHECK(g == 1);
            // certified bound: err * q * cap <= 1
            CHECK(ap.err_bound * ap.q * cap <= 1);
            // the bound really contains alpha
            mpq_class frac(ap.a, ap.q);
            frac.canonicalize();
            CHECK(alpha.cmp(frac - ap.err_bound) >= 0);
            CHECK(alpha.cmp(frac + ap.err_bound) <= 0);
        }
    }
}

TEST_CASE("rational approximation refuses uncertifiable inputs") {
    Real vague = Real::decimal("0.577215", "0.01");
    CHECK_THROWS_AS(weyl::dirichlet_approx(vague, mpz_class(1000)),
                    UncertifiableReal);
    // but a tightly certified decimal works at a modest cap
    Real tight = Real::decimal("0.5772156649", "0.0000000001");
    weyl::RationalApprox ap = weyl::dirichlet_approx(tight, mpz_class(10));
    CHECK(ap.err_bound * ap.q * 10 <= 1);
}

TEST_CASE("bound envelope: linear and log paths agree") {
    std::mt19937_64 rng(3434);
    for (int t = 0; t < 40; ++t) {
        int k = 2 + int(rng() % 8);
        double p = 1.0 + 0.9 * double(rng() % 100) / 100.0;
        std::uint64_t n = 100 + rng() % 1000000;
        weyl::RationalApprox ap;
        ap.a = long(rng() % 100) + 1;
        ap.q = long(rng() % 5000) + 1;
        ap.err_bound = mpq_class(mpz_class(1), mpz_class(4 * ap.q * ap.q));
        double eps = 0.01 + 0.2 * double(rng() % 10) / 10.0;
        double lin = weyl::bound_envelope(k, p, n, ap, eps);
        double lg = weyl::bound_envelope_log(k, p, n, ap, eps);
        CHECK(lin == doctest::Approx(lg).epsilon(1e-12));
    }
}

TEST_CASE("bound envelope validates its preconditions") {
    weyl::RationalApprox ap;
    ap.a = 1;
    ap.q = 10;
    ap.err_bound = mpq_class(1, 50);  // > 1/q^2 -> not Dirichlet quality
    CHECK_THROWS_AS(weyl::bound_envelope(3, 1.2, 1000, ap, 0.1), InvalidParam);
    ap.err_bound = mpq_class(1, 200);
    CHECK_THROWS_AS(weyl::bound_envelope(3, 1.2, 1000, ap, 0.0), DomainError);
    CHECK(weyl::bound_envelope(3, 1.2, 1000, ap, 0.1) > 0);
}

TEST_CASE("bound report carries a consistent ratio") {
    sets::IndicatorSlice s = sets::materialize(sets::SetExpr::rfree(2), 2000);
    weyl::WeylBoundReport rep = weyl::weyl_bound_report(
        s, 3, 4.0 / 3.0, Real::surd(0, 1, 2, 1), 0.1);
    CHECK(rep.k == 3);
    CHECK(rep.n == 2000);
    CHECK(rep.omega == doctest::Approx(0.25));
    CHECK(rep.ratio == doctest::Approx(rep.observed_abs / rep.envelope));
    CHECK(rep.observed_abs <= s.count() + 1e-9);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), rep.a.get_mpz_t(), rep.q.get_mpz_t());
    CHECK(g == 1);
}

TEST_CASE("differencing identity: degenerate cases") {
    weyl::DifferencingCheck one =
        weyl::differencing_identity_check(1, PolyCoeffs::zero(2));
    CHECK(one.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one.rhs == doctest::Approx(1.0).epsilon(1e-12));

    weyl::DifferencingCheck z4 =
        weyl::differencing_identity_check(4, PolyCoeffs::zero(2));
    // #{(n1,n2,n3,n4) in [1,4]^4 : n1+n2 = n3+n4} = 44
    CHECK(z4.lhs == doctest::Approx(44.0).epsilon(1e-10));
    CHECK(z4.rhs == doctest::Approx(44.0).epsilon(1e-10));
    CHECK(z4.gap <= 1e-8 * 64);

    CHECK_THROWS_AS(
        weyl::differencing_identity_check(65, PolyCoeffs::zero(2)),
        ScaleTooLarge);
}

TEST_CASE("differencing identity: random polynomials") {
    std::mt19937_64 rng(4242);
    for (int t = 0; t < 25; ++t) {
        std::uint64_t n = 2 + rng() % 15;
        int deg = 2 + int(rng() % 3);
        PolyCoeffs p;
        for (int j = 0; j <= deg; ++j) {
            if (rng() % 3 == 0) {
                p.coeffs.push_back(
                    Real::rational(long(rng() % 2001) - 1000,
                                   1 + long(rng() % 997)));
            } else {
                const long ds[] = {2, 3, 5, 7};
                p.coeffs.push_back(Real::surd(long(rng() % 7) - 3, 1,
                                              ds[rng() % 4],
                                              1 + long(rng() % 9)));
            }
        }
        weyl::DifferencingCheck chk = weyl::differencing_identity_check(n, p);
        CHECK(chk.gap <= 1e-8 * double(n) * n * n);
    }
}
