#include "subconvex/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace subconvex::weyl {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

std::complex<double> unit_phase(const exact::Frac128& f) {
    double ph = kTau * f.to_double();
    return {std::cos(ph), std::sin(ph)};
}

bool is_zero_coeff(const exact::Real& r) {
    return r.kind() == exact::Real::Kind::Rational && r.rat() == 0;
}

void require_degree(const PolyCoeffs& poly) {
    if (poly.degree() < 1)
        throw InvalidParam("phase polynomial needs degree >= 1");
}

} // namespace

PolyCoeffs PolyCoeffs::zero(int k) {
    if (k < 1) throw InvalidParam("phase polynomial needs degree >= 1");
    PolyCoeffs p;
    p.coeffs.assign(static_cast<std::size_t>(k) + 1, exact::Real::zero());
    return p;
}

PolyCoeffs PolyCoeffs::monomial(int k, exact::Real lead) {
    PolyCoeffs p = zero(k);
    p.coeffs[static_cast<std::size_t>(k)] = std::move(lead);
    return p;
}

PolyCoeffs PolyCoeffs::parse(const std::string& text) {
    std::istringstream is(text);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    PolyCoeffs p;
    std::size_t pos = 0;
    while (pos < toks.size())
        p.coeffs.push_back(exact::Real::parse_tokens(toks, pos));
    require_degree(p);
    return p;
}

std::string PolyCoeffs::serialize() const {
    std::ostringstream os;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (j) os << " ";
        os << coeffs[j].serialize();
    }
    return os.str();
}

exact::Frac128 phase128(const PolyCoeffs& poly, std::uint64_t n) {
    exact::Frac128 acc;
    for (std::size_t j = 0; j < poly.coeffs.size(); ++j) {
        if (is_zero_coeff(poly.coeffs[j])) continue;
        exact::Frac128 t = poly.coeffs[j].frac128();
        for (std::size_t i = 0; i < j; ++i) t.mul_u64(n);
        acc.add(t);
    }
    return acc;
}

void check_phase_precision(const PolyCoeffs& poly, std::uint64_t n_max) {
    for (std::size_t j = 0; j < poly.coeffs.size(); ++j) {
        mpq_class e = poly.coeffs[j].cert_err();
        if (e == 0) continue;
        mpz_class amp;
        mpz_ui_pow_ui(amp.get_mpz_t(), n_max, static_cast<unsigned long>(j));
        if (e * amp > mpq_class(1, 100))
            throw PrecisionLoss(
                "certified coefficient error exceeds 0.01 of a cycle at n = " +
                std::to_string(n_max));
    }
}

std::complex<double> restricted_weyl_sum(const sets::IndicatorSlice& slice,
                                         const PolyCoeffs& poly) {
    require_degree(poly);
    check_phase_precision(poly, slice.n_max());
    double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0;
    for (std::uint64_t n = 1; n <= slice.n_max(); ++n) {
        if (!slice.test(n)) continue;
        std::complex<double> z = unit_phase(phase128(poly, n));
        double yr = z.real() - cr, tr = sr + yr;
        cr = (tr - sr) - yr;
        sr = tr;
        double yi = z.imag() - ci, ti = si + yi;
        ci = (ti - si) - yi;
        si = ti;
    }
    return {sr, si};
}

std::complex<double> full_weyl_sum(std::uint64_t n, const PolyCoeffs& poly,
                                   double beta) {
    require_degree(poly);
    check_phase_precision(poly, n);
    exact::Frac128 bf = exact::Real::from_double(beta).frac128();
    double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0;
    for (std::uint64_t m = 1; m <= n; ++m) {
        exact::Frac128 ph = phase128(poly, m);
        exact::Frac128 tw = bf;
        tw.mul_u64(m);
        ph.add(tw);
        std::complex<double> z = unit_phase(ph);
        double yr = z.real() - cr, tr = sr + yr;
        cr = (tr - sr) - yr;
        sr = tr;
        double yi = z.imag() - ci, ti = si + yi;
        ci = (ti - si) - yi;
        si = ti;
    }
    return {sr, si};
}

// ---------------------------------------------------------------------------
// exponent functions

namespace {

void check_kp(int k, double p) {
    if (k < 2) throw DomainError("exponent functions need k >= 2");
    if (!(p >= 1.0) || !(p < 2.0))
        throw DomainError("exponent functions need 1 <= p < 2");
}

} // namespace

double sigma_exponent(int k, double p) {
    check_kp(k, p);
    if (k == 2) return 1.0 / p - 0.5;
    if (p <= 4.0 / 3.0) return std::ldexp(1.0, 1 - k);
    return std::ldexp(1.0 / p - 0.5, 3 - k);
}

double tau_exponent(int k, double p) {
    check_kp(k, p);
    if (k == 2) return 0.0;
    double kk = static_cast<double>(k) * (k - 1); // k^2 - k
    if (p <= kk / (kk - 1.0)) return 1.0 / kk;
    return (2.0 / p - 1.0) / (kk - 2.0);
}

double omega_exponent(int k, double p) {
    return std::max(sigma_exponent(k, p), tau_exponent(k, p));
}

// ---------------------------------------------------------------------------
// rational approximation and envelopes

RationalApprox dirichlet_approx(const exact::Real& alpha, const mpz_class& q_cap) {
    if (q_cap < 1) throw InvalidParam("approximation cap must be >= 1");
    // the input's own uncertainty must leave the 1/(qQ) target reachable
    mpq_class cert = alpha.cert_err();
    if (cert * 2 * q_cap * q_cap >= 1)
        throw UncertifiableReal("input error too large for denominator cap " +
                                q_cap.get_str());

    for (unsigned bits : {256u, 512u, 1024u, 2048u}) {
        exact::Interval iv = alpha.enclose(bits);
        mpq_class x = (iv.lo + iv.hi) / 2;
        mpq_class delta = (iv.hi - iv.lo) / 2;

        // continued-fraction convergents of x, last with denominator <= cap
        mpz_class a0;
        mpz_fdiv_q(a0.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
        mpz_class p_prev = 1, q_prev = 0, p_cur = a0, q_cur = 1;
        mpq_class rem = x - mpq_class(a0);
        while (rem != 0) {
            mpq_class inv = 1 / rem;
            mpz_class ai;
            mpz_fdiv_q(ai.get_mpz_t(), inv.get_num().get_mpz_t(),
                       inv.get_den().get_mpz_t());
            mpz_class pn = ai * p_cur + p_prev;
            mpz_class qn = ai * q_cur + q_prev;
            if (qn > q_cap) break;
            p_prev = p_cur;
            q_prev = q_cur;
            p_cur = pn;
            q_cur = qn;
            rem = inv - mpq_class(ai);
        }

        mpq_class diff = x - mpq_class(p_cur) / mpq_class(q_cur);
        if (diff < 0) diff = -diff;
        mpq_class err = diff + delta;

        if (err * q_cur * q_cap <= 1) {
            RationalApprox out;
            out.a = p_cur;
            out.q = q_cur;
            out.err_bound = err;
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), p_cur.get_mpz_t(), q_cur.get_mpz_t());
            out.coprime = (g == 1);
            return out;
        }
        if (!alpha.refinable()) break; // a fixed enclosure cannot improve
    }
    throw UncertifiableReal("cannot certify |alpha - a/q| <= 1/(q*cap)");
}

double bound_envelope(int k, double p, std::uint64_t n,
                      const RationalApprox& approx, double epsilon) {
    if (epsilon <= 0.0) throw DomainError("envelope epsilon must be positive");
    if (n < 1) throw InvalidParam("envelope scale must be >= 1");
    if (approx.q < 1) throw InvalidParam("approximation denominator must be >= 1");
    if (approx.err_bound * approx.q * approx.q > 1)
        throw InvalidParam("approximation does not satisfy |alpha - a/q| <= 1/q^2");
    double omega = omega_exponent(k, p);
    double nd = static_cast<double>(n);
    double qd = mpz_get_d(approx.q.get_mpz_t());
    double core = 1.0 / qd + 1.0 / nd + qd / std::pow(nd, k);
    return std::pow(nd, 1.0 + epsilon) * std::pow(core, omega);
}

double bound_envelope_log(int k, double p, std::uint64_t n,
                          const RationalApprox& approx, double epsilon) {
    if (epsilon <= 0.0) throw DomainError("envelope epsilon must be positive");
    if (n < 1) throw InvalidParam("envelope scale must be >= 1");
    if (approx.q < 1) throw InvalidParam("approximation denominator must be >= 1");
    if (approx.err_bound * approx.q * approx.q > 1)
        throw InvalidParam("approximation does not satisfy |alpha - a/q| <= 1/q^2");
    double omega = omega_exponent(k, p);
    double ln_n = std::log(static_cast<double>(n));
    double ln_q = std::log(mpz_get_d(approx.q.get_mpz_t()));
    double l1 = -ln_q;
    double l2 = -ln_n;
    double l3 = ln_q - k * ln_n;
    double m = std::max({l1, l2, l3});
    double lse = m + std::log(std::exp(l1 - m) + std::exp(l2 - m) +
                              std::exp(l3 - m));
    return std::exp((1.0 + epsilon) * ln_n + omega * lse);
}

WeylBoundReport weyl_bound_report(const sets::IndicatorSlice& slice, int k,
                                  double p, const exact::Real& lead,
                                  double epsilon) {
    double omega = omega_exponent(k, p); // validates k, p up front
    const std::uint64_t n = slice.n_max();
    if (n < 1) throw InvalidParam("report needs a nonempty scale");

    // denominator cap Q = floor(N^{k/2}) so the envelope is nontrivial
    mpz_class nk;
    mpz_ui_pow_ui(nk.get_mpz_t(), n, static_cast<unsigned long>(k));
    mpz_class q_cap = exact::isqrt(nk);
    if (q_cap < 1) q_cap = 1;

    RationalApprox approx = dirichlet_approx(lead, q_cap);
    PolyCoeffs poly = PolyCoeffs::monomial(k, lead);

    WeylBoundReport rep;
    rep.k = k;
    rep.p = p;
    rep.n = n;
    rep.a = approx.a;
    rep.q = approx.q;
    rep.epsilon = epsilon;
    rep.omega = omega;
    rep.envelope = bound_envelope(k, p, n, approx, epsilon);
    rep.observed_abs = std::abs(restricted_weyl_sum(slice, poly));
    rep.ratio = rep.observed_abs / rep.envelope;
    return rep;
}

// ---------------------------------------------------------------------------
// differencing identity

DifferencingCheck differencing_identity_check(std::uint64_t n,
                                              const PolyCoeffs& poly) {
    if (n < 1) throw InvalidParam("scale must be >= 1");
    if (n > 64) throw ScaleTooLarge("brute-force identity check capped at 64");
    require_degree(poly);
    check_phase_precision(poly, n);

    std::vector<exact::Frac128> ph(n + 1);
    std::vector<std::complex<double>> ez(n + 1);
    for (std::uint64_t m = 1; m <= n; ++m) {
        ph[m] = phase128(poly, m);
        ez[m] = unit_phase(ph[m]);
    }

    // lhs by orthogonality: sum over s of |sum_{n1+n2=s} e(psi(n1)+psi(n2))|^2
    std::vector<std::complex<double>> conv(2 * n + 1, 0.0);
    for (std::uint64_t n1 = 1; n1 <= n; ++n1)
        for (std::uint64_t n2 = 1; n2 <= n; ++n2)
            conv[n1 + n2] += ez[n1] * ez[n2];
    double lhs = 0.0;
    for (std::uint64_t s = 2; s <= 2 * n; ++s) lhs += std::norm(conv[s]);

    // rhs: double shift sum over the second difference of psi
    std::complex<double> acc = 0.0;
    const long long nn = static_cast<long long>(n);
    for (long long h1 = -(nn - 1); h1 <= nn - 1; ++h1) {
        for (long long h2 = -(nn - 1); h2 <= nn - 1; ++h2) {
            long long lo = 1 + std::max({0ll, -h1, -h2, -h1 - h2});
            long long hi = nn - std::max({0ll, h1, h2, h1 + h2});
            for (long long m = lo; m <= hi; ++m) {
                exact::Frac128 d = ph[static_cast<std::uint64_t>(m + h1 + h2)];
                d.sub(ph[static_cast<std::uint64_t>(m + h1)]);
                d.sub(ph[static_cast<std::uint64_t>(m + h2)]);
                d.add(ph[static_cast<std::uint64_t>(m)]);
                acc += unit_phase(d);
            }
        }
    }

    DifferencingCheck chk;
    chk.lhs = lhs;
    chk.rhs = acc.real();
    chk.gap = std::hypot(lhs - acc.real(), acc.imag());
    return chk;
}

} // namespace subconvex::weyl
