#include "subconvex/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "subconvex/fftgrid.hpp"
#include "subconvex/weyl.hpp"

namespace subconvex::arith {

namespace {

constexpr std::uint64_t kSieveCeiling = 1ull << 27;
constexpr std::uint64_t kTauCeiling = 4096;
constexpr std::uint64_t kCharCeiling = 1ull << 24;
constexpr double kTau2Pi = 2.0 * std::numbers::pi;

void check_sieve(std::uint64_t n) {
    if (n < 1) throw InvalidParam("table length must be >= 1");
    if (n > kSieveCeiling)
        throw ResourceLimit("table length exceeds the sieve ceiling");
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(std::uint64_t q) {
    if (q < 2) return false;
    for (std::uint64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

// truncated product c = a * b (degrees < cap)
std::vector<mpz_class> poly_mul(const std::vector<mpz_class>& a,
                                const std::vector<mpz_class>& b,
                                std::size_t cap) {
    std::vector<mpz_class> c(cap, 0);
    for (std::size_t i = 0; i < a.size() && i < cap; ++i) {
        if (a[i] == 0) continue;
        std::size_t jmax = std::min(b.size(), cap - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            if (b[j] == 0) continue;
            mpz_addmul(c[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }
    return c;
}

// frac(n^k * theta) with per-coefficient 128-bit reduction, plus the same
// certified-error guard as polynomial phases
exact::Frac128 power_phase(const exact::Real& theta, std::uint64_t n, int k) {
    exact::Frac128 t = theta.frac128();
    for (int i = 0; i < k; ++i) t.mul_u64(n);
    return t;
}

void check_theta_precision(const exact::Real& theta, std::uint64_t n_max, int k) {
    mpq_class e = theta.cert_err();
    if (e == 0) return;
    mpz_class amp;
    mpz_ui_pow_ui(amp.get_mpz_t(), n_max, static_cast<unsigned long>(k));
    if (e * amp > mpq_class(1, 100))
        throw PrecisionLoss("certified error of the twist exceeds 0.01 of a "
                            "cycle at n = " + std::to_string(n_max));
}

std::uint64_t default_grid_32(std::uint64_t n) {
    std::uint64_t m = 64;
    while (m < 32 * std::max<std::uint64_t>(n, 1)) m <<= 1;
    return m;
}

} // namespace

// ---------------------------------------------------------------------------
// sieves

std::vector<int> mobius_table(std::uint64_t n) {
    check_sieve(n);
    std::vector<int> mu(n + 1, 0);
    mu[1] = 1;
    std::vector<std::uint32_t> primes;
    std::vector<bool> comp(n + 1, false);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (!comp[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            mu[i] = -1;
        }
        for (std::uint32_t p : primes) {
            if (i * p > n) break;
            comp[i * p] = true;
            if (i % p == 0) {
                mu[i * p] = 0;
                break;
            }
            mu[i * p] = -mu[i];
        }
    }
    return mu;
}

std::vector<double> mangoldt_table(std::uint64_t n) {
    check_sieve(n);
    std::vector<double> lam(n + 1, 0.0);
    std::vector<bool> comp(n + 1, false);
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (comp[p]) continue;
        for (std::uint64_t j = p * p; j <= n; j += p) comp[j] = true;
        double lp = std::log(static_cast<double>(p));
        for (std::uint64_t pk = p;; pk *= p) {
            lam[pk] = lp;
            if (pk > n / p) break;
        }
    }
    return lam;
}

std::vector<mpz_class> cusp_tau_table(std::uint64_t n) {
    if (n < 1) throw InvalidParam("table length must be >= 1");
    if (n > kTauCeiling)
        throw ResourceLimit("exact cusp coefficients capped at " +
                            std::to_string(kTauCeiling));
    // E = prod (1 - q^j) expanded by the pentagonal-number recursion: a
    // sparse +-1 series. The 24th power is three squarings and one product.
    std::vector<mpz_class> e(n, 0);
    e[0] = 1;
    for (std::uint64_t j = 1;; ++j) {
        std::uint64_t g1 = j * (3 * j - 1) / 2;
        std::uint64_t g2 = j * (3 * j + 1) / 2;
        if (g1 >= n && g2 >= n) break;
        int sign = (j % 2) ? -1 : 1;
        if (g1 < n) e[g1] += sign;
        if (g2 < n) e[g2] += sign;
    }
    std::vector<mpz_class> e2 = poly_mul(e, e, n);
    std::vector<mpz_class> e4 = poly_mul(e2, e2, n);
    std::vector<mpz_class> e8 = poly_mul(e4, e4, n);
    std::vector<mpz_class> e16 = poly_mul(e8, e8, n);
    // coefficient m-1 of E^24 is the m-th cusp coefficient
    return poly_mul(e16, e8, n);
}

// ---------------------------------------------------------------------------
// characters

std::complex<double> DirichletChar::value(std::uint64_t n) const {
    std::uint64_t r = n % q;
    if (r == 0) return 0.0;
    double ph = kTau2Pi * static_cast<double>(t % (q - 1)) *
                static_cast<double>(ind[r]) / static_cast<double>(q - 1);
    return {std::cos(ph), std::sin(ph)};
}

DirichletChar dirichlet_char(std::uint64_t q, std::uint64_t t) {
    if (q > kCharCeiling) throw ResourceLimit("character modulus too large");
    if (!is_prime_u64(q)) throw NotPrime("character modulus must be prime");
    if (t > q - 2 && q > 2)
        throw InvalidParam("character index must lie in [0, q-2]");
    if (q == 2 && t != 0)
        throw InvalidParam("only the principal character exists mod 2");

    // factor q-1 for the primitive-root order test
    std::uint64_t phi = q - 1;
    std::vector<std::uint64_t> factors;
    std::uint64_t rest = phi;
    for (std::uint64_t d = 2; d * d <= rest; ++d) {
        if (rest % d) continue;
        factors.push_back(d);
        while (rest % d == 0) rest /= d;
    }
    if (rest > 1) factors.push_back(rest);

    std::uint64_t g = 1;
    for (std::uint64_t cand = 2; cand < q; ++cand) {
        bool ok = true;
        for (std::uint64_t f : factors)
            if (powmod(cand, phi / f, q) == 1) { ok = false; break; }
        if (ok) { g = cand; break; }
    }

    DirichletChar chi;
    chi.q = q;
    chi.t = t;
    chi.g = g;
    chi.ind.assign(q, 0);
    std::uint64_t pow = 1;
    for (std::uint64_t e = 0; e < phi; ++e) {
        chi.ind[pow] = e;
        pow = mulmod(pow, g, q);
    }
    return chi;
}

std::complex<double> gauss_sum(const DirichletChar& chi, long long a) {
    if (chi.principal())
        throw PrincipalChar("gauss sum requires a non-principal character");
    std::uint64_t q = chi.q;
    std::uint64_t am = static_cast<std::uint64_t>(((a % static_cast<long long>(q)) +
                                                   static_cast<long long>(q)) %
                                                  static_cast<long long>(q));
    std::complex<double> s = 0.0;
    for (std::uint64_t m = 1; m < q; ++m) {
        // phase m*a/q reduced exactly in integers before the trig call
        double ph = kTau2Pi * static_cast<double>(m * am % q) /
                    static_cast<double>(q);
        s += chi.value(m) * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return s;
}

// ---------------------------------------------------------------------------
// materialized arithmetic functions

ArithFn make_one(std::uint64_t n) {
    check_sieve(n);
    ArithFn f;
    f.label = "one";
    f.values.assign(n, 1.0);
    return f;
}

ArithFn make_mobius(std::uint64_t n) {
    ArithFn f;
    f.label = "mobius";
    std::vector<int> mu = mobius_table(n);
    f.values.assign(mu.begin() + 1, mu.end());
    return f;
}

ArithFn make_mangoldt(std::uint64_t n) {
    ArithFn f;
    f.label = "mangoldt";
    std::vector<double> lam = mangoldt_table(n);
    f.values.assign(lam.begin() + 1, lam.end());
    return f;
}

ArithFn make_cusp_tau(std::uint64_t n) {
    ArithFn f;
    f.label = "cusptau";
    std::vector<mpz_class> t = cusp_tau_table(n);
    f.values.resize(n);
    for (std::uint64_t i = 0; i < n; ++i)
        f.values[i] = mpz_get_d(t[i].get_mpz_t());
    return f;
}

ArithFn make_mobius_phase(std::uint64_t n, int k, const exact::Real& theta) {
    if (k < 1) throw InvalidParam("twist power must be >= 1");
    check_theta_precision(theta, n, k);
    ArithFn f = make_mobius(n);
    f.label = "mobius-phase " + std::to_string(k) + " " + theta.serialize();
    for (std::uint64_t m = 1; m <= n; ++m) {
        if (f.values[m - 1] == 0.0) continue;
        double ph = kTau2Pi * power_phase(theta, m, k).to_double();
        f.values[m - 1] *= std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return f;
}

ArithFn make_mangoldt_phase(std::uint64_t n, int k, const exact::Real& theta) {
    if (k < 1) throw InvalidParam("twist power must be >= 1");
    check_theta_precision(theta, n, k);
    ArithFn f = make_mangoldt(n);
    f.label = "mangoldt-phase " + std::to_string(k) + " " + theta.serialize();
    for (std::uint64_t m = 1; m <= n; ++m) {
        if (f.values[m - 1] == 0.0) continue;
        double ph = kTau2Pi * power_phase(theta, m, k).to_double();
        f.values[m - 1] *= std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return f;
}

ArithFn make_char_twist(std::uint64_t n, const DirichletChar& chi) {
    check_sieve(n);
    ArithFn f;
    f.label = "char " + std::to_string(chi.q) + " " + std::to_string(chi.t);
    f.values.resize(n);
    for (std::uint64_t m = 1; m <= n; ++m) f.values[m - 1] = chi.value(m);
    return f;
}

ArithFn make_explicit(std::vector<std::complex<double>> values,
                      std::string label) {
    ArithFn f;
    f.label = std::move(label);
    f.values = std::move(values);
    return f;
}

ArithFn parse_fn(const std::string& text, std::uint64_t n) {
    std::istringstream is(text);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    std::size_t pos = 0;
    auto need = [&](const char* what) -> std::string {
        if (pos >= toks.size())
            throw InvalidParam(std::string("function spec ended early: ") + what);
        return toks[pos++];
    };
    auto need_u64 = [&](const char* what) -> std::uint64_t {
        std::string s = need(what);
        try {
            std::size_t used = 0;
            unsigned long long v = std::stoull(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw InvalidParam(std::string("bad integer for ") + what + ": " + s);
        }
    };

    std::string head = need("function name");
    ArithFn f;
    if (head == "one") f = make_one(n);
    else if (head == "mobius") f = make_mobius(n);
    else if (head == "mangoldt") f = make_mangoldt(n);
    else if (head == "cusptau") f = make_cusp_tau(n);
    else if (head == "mobius-phase" || head == "mangoldt-phase") {
        std::uint64_t k = need_u64("twist power");
        if (k < 1 || k > 16) throw InvalidParam("twist power out of range");
        exact::Real theta = exact::Real::parse_tokens(toks, pos);
        f = head == "mobius-phase"
                ? make_mobius_phase(n, static_cast<int>(k), theta)
                : make_mangoldt_phase(n, static_cast<int>(k), theta);
    } else if (head == "char") {
        std::uint64_t q = need_u64("character modulus");
        std::uint64_t tt = need_u64("character index");
        f = make_char_twist(n, dirichlet_char(q, tt));
    } else {
        throw InvalidParam("unknown arithmetic function: " + head);
    }
    if (pos != toks.size())
        throw InvalidParam("trailing tokens in function spec");
    return f;
}

// ---------------------------------------------------------------------------
// norms, averages, and the exact inequality

HfNorms hf_norms(const ArithFn& f, std::uint64_t grid) {
    const std::uint64_t n = f.n_max();
    if (n < 1) throw InvalidParam("function table is empty");
    std::uint64_t m = grid ? grid : default_grid_32(n);
    if (m == 0 || (m & (m - 1)) != 0)
        throw InvalidParam("grid size must be a power of two");
    if (m < 32 * n)
        throw GridTooCoarse("norm grid " + std::to_string(m) + " below 32*N = " +
                            std::to_string(32 * n));

    std::vector<std::complex<double>> h = fft::value_grid(f.values, m);
    HfNorms out;
    out.grid = m;
    double best = -1.0, best_half = -1.0;
    std::uint64_t best_j = 0;
    for (std::uint64_t j = 0; j < m; ++j) {
        double v = std::abs(h[j]);
        if (v > best) { best = v; best_j = j; }
        if ((j & 1) == 0 && v > best_half) best_half = v;
    }
    const double nd = static_cast<double>(n);
    out.sup_norm = best / nd;
    out.sup_alpha = static_cast<double>(best_j) / static_cast<double>(m);
    out.refinement_delta = (best - best_half) / nd;

    double s2 = 0.0, s1 = 0.0;
    for (const std::complex<double>& v : f.values) {
        s2 += std::norm(v);
        s1 += std::abs(v);
    }
    out.l2_norm = std::sqrt(s2 / nd);
    out.l1_over_n = s1 / nd;
    return out;
}

std::complex<double> restricted_average(const ArithFn& f,
                                        const sets::IndicatorSlice& slice) {
    if (f.n_max() != slice.n_max())
        throw LengthMismatch("function table bound " + std::to_string(f.n_max()) +
                             " != slice bound " + std::to_string(slice.n_max()));
    const std::uint64_t n = slice.n_max();
    if (n < 1) throw InvalidParam("empty scale");
    std::complex<double> s = 0.0;
    for (std::uint64_t m = 1; m <= n; ++m)
        if (slice.test(m)) s += f.values[m - 1];
    return s / static_cast<double>(n);
}

HolderCheck holder_chain_check(const ArithFn& f,
                               const sets::IndicatorSlice& slice, double p,
                               std::uint64_t grid) {
    if (!(p >= 1.0) || !(p < 2.0))
        throw DomainError("inequality exponent must lie in [1, 2)");
    if (f.n_max() != slice.n_max())
        throw LengthMismatch("function table bound != slice bound");
    const std::uint64_t n = slice.n_max();
    if (n < 1) throw InvalidParam("empty scale");
    std::uint64_t m = grid ? grid : default_grid_32(n);
    if (m == 0 || (m & (m - 1)) != 0)
        throw InvalidParam("grid size must be a power of two");
    if (m < 32 * n)
        throw GridTooCoarse("inequality grid below 32*N");

    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);

    std::vector<std::complex<double>> h = fft::value_grid(f.values, m);
    std::vector<double> g = fft::abs_grid(slice, m);

    double sup = 0.0, i2 = 0.0;
    for (std::uint64_t j = 0; j < m; ++j) {
        double v = std::abs(h[j]) / nd;
        sup = std::max(sup, v);
        i2 += v * v;
    }
    i2 /= md;

    double gp = std::pow(g[0], p) + std::pow(g[m / 2], p);
    for (std::uint64_t j = 1; j < m / 2; ++j) gp += 2.0 * std::pow(g[j], p);
    gp /= md;

    HolderCheck chk;
    chk.lhs = std::abs(restricted_average(f, slice));
    chk.rhs = std::pow(sup, 2.0 / p - 1.0) * std::pow(i2, 1.0 - 1.0 / p) *
              std::pow(gp, 1.0 / p);
    chk.slack = chk.rhs - chk.lhs;
    return chk;
}

CharSumReport restricted_char_sum(const DirichletChar& chi,
                                  const sets::IndicatorSlice& slice, double p) {
    if (chi.principal())
        throw PrincipalChar("character sum screen requires a non-principal "
                            "character");
    if (!(p >= 1.0) || !(p < 2.0))
        throw DomainError("screen exponent must lie in [1, 2)");
    const std::uint64_t n = slice.n_max();
    if (n < 1) throw InvalidParam("empty scale");

    CharSumReport rep;
    for (std::uint64_t m = 1; m <= n; ++m)
        if (slice.test(m)) rep.sum += chi.value(m);
    double nd = static_cast<double>(n), qd = static_cast<double>(chi.q);
    rep.envelope = std::sqrt(qd) * std::pow(nd, 1.0 - 1.0 / p) *
                   std::pow(1.0 + nd / qd, 1.0 / p);
    rep.ratio = std::abs(rep.sum) / rep.envelope;
    return rep;
}

bool minor_arc_theta(const exact::Real& theta, std::uint64_t n, double a_exp) {
    if (n < 2) throw InvalidParam("scale must be >= 2");
    double lg = std::pow(std::log(2.0 * static_cast<double>(n)), a_exp);
    mpz_class cap;
    mpz_set_d(cap.get_mpz_t(), std::ceil(static_cast<double>(n) * lg));
    if (cap < 1) cap = 1;
    weyl::RationalApprox approx = weyl::dirichlet_approx(theta, cap);
    return mpz_get_d(approx.q.get_mpz_t()) > lg;
}

} // namespace subconvex::arith
