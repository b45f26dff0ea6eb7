#include "subconvex/setexpr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "subconvex/parallel.hpp"

namespace subconvex::sets {

namespace {

constexpr std::uint64_t kMaxMaterialize = 1ull << 27;

void check_ceiling(std::uint64_t n) {
    if (n > kMaxMaterialize)
        throw ResourceLimit("materialization bound " + std::to_string(n) +
                            " exceeds limit " + std::to_string(kMaxMaterialize));
}

// Primes up to m by plain sieve (m is tiny: N^(1/r)).
std::vector<std::uint64_t> primes_upto(std::uint64_t m) {
    std::vector<bool> comp(m + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= m; ++i) {
        if (!comp[i]) {
            out.push_back(i);
            for (std::uint64_t j = i * i; j <= m; j += i) comp[j] = true;
        }
    }
    return out;
}

// b^e, saturating at UINT64_MAX instead of overflowing
std::uint64_t ipow_sat(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) {
        if (b != 0 && r > UINT64_MAX / b) return UINT64_MAX;
        r *= b;
    }
    return r;
}

} // namespace

SetExpr SetExpr::naturals() { return SetExpr{}; }

SetExpr SetExpr::rfree(int r) {
    if (r < 2) throw InvalidParam("rfree order must be >= 2");
    SetExpr e;
    e.kind = Kind::RFree;
    e.r = r;
    return e;
}

SetExpr SetExpr::beatty(exact::Real alpha, exact::Real beta) {
    SetExpr e;
    e.kind = Kind::Beatty;
    e.alpha = std::move(alpha);
    e.beta = std::move(beta);
    if (e.alpha->cmp(0) <= 0) throw InvalidParam("beatty slope must be positive");
    return e;
}

SetExpr SetExpr::complement(SetExpr e) {
    SetExpr r;
    r.kind = Kind::Complement;
    r.kids.push_back(std::move(e));
    return r;
}

SetExpr SetExpr::intersect(SetExpr a, SetExpr b) {
    SetExpr r;
    r.kind = Kind::Intersect;
    r.kids.push_back(std::move(a));
    r.kids.push_back(std::move(b));
    return r;
}

SetExpr SetExpr::set_union(SetExpr a, SetExpr b) {
    SetExpr r;
    r.kind = Kind::Union;
    r.kids.push_back(std::move(a));
    r.kids.push_back(std::move(b));
    return r;
}

SetExpr SetExpr::difference(SetExpr a, SetExpr b) {
    SetExpr r;
    r.kind = Kind::Difference;
    r.kids.push_back(std::move(a));
    r.kids.push_back(std::move(b));
    return r;
}

SetExpr SetExpr::affine(long long q, long long a, SetExpr e) {
    if (q < 1) throw InvalidParam("affine scale must be >= 1");
    SetExpr r;
    r.kind = Kind::Affine;
    r.q = q;
    r.a = a;
    r.kids.push_back(std::move(e));
    return r;
}

SetExpr SetExpr::perturb(SetExpr base, SetExpr remove, SetExpr add) {
    SetExpr r;
    r.kind = Kind::Perturb;
    r.kids.push_back(std::move(base));
    r.kids.push_back(std::move(remove));
    r.kids.push_back(std::move(add));
    return r;
}

SetExpr SetExpr::splice(std::vector<SetExpr> parts,
                        std::vector<std::pair<mpq_class, mpq_class>> cuts) {
    if (parts.empty() || parts.size() != cuts.size())
        throw InvalidParam("splice needs one cut interval per part");
    mpq_class prev = 0;
    for (auto& [a, b] : cuts) {
        if (a != prev) throw InvalidParam("splice cuts must partition (0,1] contiguously");
        if (!(a < b)) throw InvalidParam("splice cut interval must be nonempty");
        prev = b;
    }
    if (prev != 1) throw InvalidParam("splice cuts must end at 1");
    SetExpr r;
    r.kind = Kind::Splice;
    r.kids = std::move(parts);
    r.cuts = std::move(cuts);
    return r;
}

SetExpr SetExpr::explicit_set(std::vector<std::uint64_t> members) {
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (members[i] < 1) throw InvalidParam("explicit members must be positive");
        if (i && members[i] <= members[i - 1])
            throw InvalidParam("explicit members must be strictly increasing");
    }
    SetExpr r;
    r.kind = Kind::Explicit;
    r.members = std::move(members);
    return r;
}

namespace {

IndicatorSlice materialize_beatty(const SetExpr& e, std::uint64_t n) {
    IndicatorSlice s(n);
    if (n == 0) return s;
    const exact::Real& alpha = *e.alpha;
    const exact::Real& beta = *e.beta;
    if (alpha.cmp(1) <= 0) {
        // slope in (0,1]: floor(alpha*m+beta) steps by 0 or 1, so the set is
        // every integer from its first value upward
        mpz_class first = exact::floor_linear(alpha, 1, beta);
        std::uint64_t lo = 1;
        if (first > 1) {
            if (first > mpz_class(n)) return s;
            lo = mpz_get_ui(first.get_mpz_t());
        }
        for (std::uint64_t t = lo; t <= n; ++t) s.set(t);
        return s;
    }
    // slope > 1: generate floor(alpha*m+beta) directly; strictly increasing in m
    double ad = alpha.to_double(), bd = beta.to_double();
    long long m0 = 1;
    if (bd < 0) {
        double est = (1.0 - bd) / ad - 2.0;
        if (est > 1) m0 = static_cast<long long>(est);
        // the estimate came from doubles; walk back exactly so no element
        // with floor(alpha*m+beta) >= 1 is skipped
        while (m0 > 1 &&
               exact::floor_linear(alpha, mpz_class(static_cast<long>(m0 - 1)),
                                   beta) >= 1)
            --m0;
    }
    for (long long m = m0;; ++m) {
        mpz_class t =
            exact::floor_linear(alpha, mpz_class(static_cast<long>(m)), beta);
        if (t > mpz_class(n)) break;
        if (t >= 1) s.set(mpz_get_ui(t.get_mpz_t()));
    }
    return s;
}

IndicatorSlice materialize_impl(const SetExpr& e, std::uint64_t n) {
    check_ceiling(n);
    switch (e.kind) {
    case SetExpr::Kind::Naturals: {
        IndicatorSlice s(n);
        s.fill_all();
        return s;
    }
    case SetExpr::Kind::RFree: {
        IndicatorSlice s(n);
        s.fill_all();
        if (n < 4) return s;
        std::uint64_t lim = static_cast<std::uint64_t>(std::pow(double(n), 1.0 / e.r)) + 2;
        while (lim >= 2 && ipow_sat(lim, e.r) > n) --lim;
        IndicatorSlice strike(n);
        for (std::uint64_t p : primes_upto(lim)) {
            std::uint64_t pr = ipow_sat(p, e.r);
            for (std::uint64_t j = pr; j <= n; j += pr) strike.set(j);
        }
        return IndicatorSlice::bit_diff(s, strike);
    }
    case SetExpr::Kind::Beatty:
        return materialize_beatty(e, n);
    case SetExpr::Kind::Complement:
        return IndicatorSlice::bit_not(materialize_impl(e.kids[0], n));
    case SetExpr::Kind::Intersect:
        return IndicatorSlice::bit_and(materialize_impl(e.kids[0], n),
                                       materialize_impl(e.kids[1], n));
    case SetExpr::Kind::Union:
        return IndicatorSlice::bit_or(materialize_impl(e.kids[0], n),
                                      materialize_impl(e.kids[1], n));
    case SetExpr::Kind::Difference:
        return IndicatorSlice::bit_diff(materialize_impl(e.kids[0], n),
                                        materialize_impl(e.kids[1], n));
    case SetExpr::Kind::Affine: {
        IndicatorSlice s(n);
        __int128 span = static_cast<__int128>(n) - e.a;
        if (span < static_cast<__int128>(e.q)) return s; // no child element maps into [1,n]
        std::uint64_t child_n = static_cast<std::uint64_t>(span / e.q);
        IndicatorSlice child = materialize_impl(e.kids[0], child_n);
        for (std::uint64_t m = 1; m <= child_n; ++m) {
            if (!child.test(m)) continue;
            __int128 t = static_cast<__int128>(e.q) * m + e.a;
            if (t >= 1 && t <= static_cast<__int128>(n))
                s.set(static_cast<std::uint64_t>(t));
        }
        return s;
    }
    case SetExpr::Kind::Perturb: {
        IndicatorSlice base = materialize_impl(e.kids[0], n);
        IndicatorSlice rem = materialize_impl(e.kids[1], n);
        IndicatorSlice add = materialize_impl(e.kids[2], n);
        return IndicatorSlice::bit_or(IndicatorSlice::bit_diff(base, rem), add);
    }
    case SetExpr::Kind::Splice: {
        // cut intervals are evaluated against this materialization bound
        IndicatorSlice s(n);
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
            const auto& [a, b] = e.cuts[i];
            // part window: a*n < m <= b*n, exact rational comparisons
            mpz_class lo_num = a.get_num() * n, hi_num = b.get_num() * n;
            // smallest m with m*den > lo_num  ->  m = floor(lo_num/den) + 1
            mpz_class lo_m = lo_num / a.get_den() + 1;
            // largest m with m*den <= hi_num  ->  m = floor(hi_num/den)
            mpz_class hi_m;
            mpz_fdiv_q(hi_m.get_mpz_t(), hi_num.get_mpz_t(), b.get_den().get_mpz_t());
            if (hi_m > mpz_class(n)) hi_m = n;
            if (lo_m < 1) lo_m = 1;
            if (lo_m > hi_m) continue;
            IndicatorSlice part = materialize_impl(e.kids[i], n);
            std::uint64_t lo = mpz_get_ui(lo_m.get_mpz_t());
            std::uint64_t hi = mpz_get_ui(hi_m.get_mpz_t());
            for (std::uint64_t m = lo; m <= hi; ++m)
                if (part.test(m)) s.set(m);
        }
        return s;
    }
    case SetExpr::Kind::Explicit: {
        IndicatorSlice s(n);
        for (std::uint64_t m : e.members) {
            if (m > n) break;
            s.set(m);
        }
        return s;
    }
    }
    throw DomainError("unreachable set kind");
}

} // namespace

IndicatorSlice materialize(const SetExpr& expr, std::uint64_t n) {
    return materialize_impl(expr, n);
}

std::vector<CountPoint> count_ladder(const SetExpr& expr,
                                     const std::vector<std::uint64_t>& ns) {
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1])
            throw InvalidParam("scale ladder must be strictly ascending");
    std::vector<CountPoint> out(ns.size());
    parallel_for_index(ns.size(), [&](std::size_t i) {
        IndicatorSlice s = materialize(expr, ns[i]);
        out[i] = {ns[i], s.count(),
                  ns[i] ? double(s.count()) / double(ns[i]) : 0.0};
    });
    return out;
}

std::optional<double> young_exponent(double q, double r) {
    if (!(q > 1.0 && q < 2.0 && r > 1.0 && r < 2.0))
        throw DomainError("young exponent inputs must lie in (1,2)");
    double s = 1.0 / q + 1.0 / r;
    // strict window 3/2 < s < 2; a 1e-9 halo keeps the rounded boundary
    // case q = r = 4/3 on the excluded side
    if (s <= 1.5 + 1e-9 || s >= 2.0 - 1e-9) return std::nullopt;
    return 1.0 / (s - 1.0);
}

// ---------------------------------------------------------------------------
// parse / serialize

namespace {

std::vector<std::string> tokenize(const std::string& text) {
    std::istringstream is(text);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

std::string need(const std::vector<std::string>& toks, std::size_t& pos,
                 const char* what) {
    if (pos >= toks.size())
        throw InvalidParam(std::string("set expression ended early, expected ") + what);
    return toks[pos++];
}

long long parse_ll(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InvalidParam(std::string("bad integer for ") + what + ": " + s);
    }
}

mpq_class parse_cut(const std::string& s) {
    try {
        if (s.find('/') != std::string::npos) {
            mpq_class q(s);
            q.canonicalize();
            return q;
        }
        return mpq_class(mpz_class(s));
    } catch (const std::exception&) {
        throw InvalidParam("bad splice cut: " + s);
    }
}

SetExpr parse_expr(const std::vector<std::string>& toks, std::size_t& pos) {
    std::string head = need(toks, pos, "set constructor");
    if (head == "naturals") return SetExpr::naturals();
    if (head == "rfree") {
        long long r = parse_ll(need(toks, pos, "rfree order"), "rfree order");
        if (r < 2 || r > 64) throw InvalidParam("rfree order out of range");
        return SetExpr::rfree(static_cast<int>(r));
    }
    if (head == "beatty") {
        exact::Real alpha = exact::Real::parse_tokens(toks, pos);
        exact::Real beta = exact::Real::parse_tokens(toks, pos);
        return SetExpr::beatty(std::move(alpha), std::move(beta));
    }
    if (head == "complement") return SetExpr::complement(parse_expr(toks, pos));
    if (head == "intersect") {
        SetExpr a = parse_expr(toks, pos);
        SetExpr b = parse_expr(toks, pos);
        return SetExpr::intersect(std::move(a), std::move(b));
    }
    if (head == "union") {
        SetExpr a = parse_expr(toks, pos);
        SetExpr b = parse_expr(toks, pos);
        return SetExpr::set_union(std::move(a), std::move(b));
    }
    if (head == "difference") {
        SetExpr a = parse_expr(toks, pos);
        SetExpr b = parse_expr(toks, pos);
        return SetExpr::difference(std::move(a), std::move(b));
    }
    if (head == "affine") {
        long long q = parse_ll(need(toks, pos, "affine scale"), "affine scale");
        long long a = parse_ll(need(toks, pos, "affine offset"), "affine offset");
        return SetExpr::affine(q, a, parse_expr(toks, pos));
    }
    if (head == "perturb") {
        SetExpr base = parse_expr(toks, pos);
        SetExpr rem = parse_expr(toks, pos);
        SetExpr add = parse_expr(toks, pos);
        return SetExpr::perturb(std::move(base), std::move(rem), std::move(add));
    }
    if (head == "splice") {
        long long k = parse_ll(need(toks, pos, "splice arity"), "splice arity");
        if (k < 1 || k > 64) throw InvalidParam("splice arity out of range");
        std::vector<SetExpr> parts;
        std::vector<std::pair<mpq_class, mpq_class>> cuts;
        for (long long i = 0; i < k; ++i) {
            mpq_class a = parse_cut(need(toks, pos, "cut lo"));
            mpq_class b = parse_cut(need(toks, pos, "cut hi"));
            cuts.emplace_back(std::move(a), std::move(b));
            parts.push_back(parse_expr(toks, pos));
        }
        return SetExpr::splice(std::move(parts), std::move(cuts));
    }
    if (head == "explicit") {
        long long k = parse_ll(need(toks, pos, "explicit count"), "explicit count");
        if (k < 0 || k > (1ll << 22)) throw InvalidParam("explicit count out of range");
        std::vector<std::uint64_t> ms;
        ms.reserve(static_cast<std::size_t>(k));
        for (long long i = 0; i < k; ++i) {
            long long v = parse_ll(need(toks, pos, "explicit member"), "explicit member");
            if (v < 1) throw InvalidParam("explicit members must be positive");
            ms.push_back(static_cast<std::uint64_t>(v));
        }
        return SetExpr::explicit_set(std::move(ms));
    }
    throw InvalidParam("unknown set constructor: " + head);
}

void serialize_expr(const SetExpr& e, std::ostringstream& os) {
    switch (e.kind) {
    case SetExpr::Kind::Naturals: os << "naturals"; return;
    case SetExpr::Kind::RFree: os << "rfree " << e.r; return;
    case SetExpr::Kind::Beatty:
        os << "beatty " << e.alpha->serialize() << " " << e.beta->serialize();
        return;
    case SetExpr::Kind::Complement:
        os << "complement ";
        serialize_expr(e.kids[0], os);
        return;
    case SetExpr::Kind::Intersect:
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Difference:
        os << (e.kind == SetExpr::Kind::Intersect ? "intersect "
              : e.kind == SetExpr::Kind::Union    ? "union "
                                                  : "difference ");
        serialize_expr(e.kids[0], os);
        os << " ";
        serialize_expr(e.kids[1], os);
        return;
    case SetExpr::Kind::Affine:
        os << "affine " << e.q << " " << e.a << " ";
        serialize_expr(e.kids[0], os);
        return;
    case SetExpr::Kind::Perturb:
        os << "perturb ";
        serialize_expr(e.kids[0], os);
        os << " ";
        serialize_expr(e.kids[1], os);
        os << " ";
        serialize_expr(e.kids[2], os);
        return;
    case SetExpr::Kind::Splice:
        os << "splice " << e.kids.size();
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
            const auto& [a, b] = e.cuts[i];
            os << " " << a.get_num() << "/" << a.get_den()
               << " " << b.get_num() << "/" << b.get_den() << " ";
            serialize_expr(e.kids[i], os);
        }
        return;
    case SetExpr::Kind::Explicit:
        os << "explicit " << e.members.size();
        for (std::uint64_t m : e.members) os << " " << m;
        return;
    }
}

} // namespace

SetExpr SetExpr::parse(const std::string& text) {
    std::vector<std::string> toks = tokenize(text);
    std::size_t pos = 0;
    SetExpr e = parse_expr(toks, pos);
    if (pos != toks.size())
        throw InvalidParam("trailing tokens in set expression");
    return e;
}

std::string SetExpr::serialize() const {
    std::ostringstream os;
    serialize_expr(*this, os);
    return os.str();
}

} // namespace subconvex::sets
