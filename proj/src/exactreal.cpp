#include "subconvex/exactreal.hpp"

#include <cmath>
#include <sstream>

namespace subconvex::exact {

namespace {

// Largest prime checked when extracting square factors from a radicand.
constexpr unsigned kSquareTrialLimit = 1000;

mpz_class pow2z(unsigned bits) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, bits);
    return r;
}

// Reduce c*sqrt(d) so that d carries no square factor detectable by trial
// division below kSquareTrialLimit or by a perfect-square cofactor.
void normalize_radicand(mpq_class& coeff, mpz_class& d) {
    for (unsigned f = 2; f <= kSquareTrialLimit; ++f) {
        mpz_class f2 = mpz_class(f) * f;
        while (mpz_divisible_p(d.get_mpz_t(), f2.get_mpz_t())) {
            d /= f2;
            coeff *= f;
        }
        if (d < f2) break;
    }
    if (mpz_perfect_square_p(d.get_mpz_t())) {
        mpz_class s = isqrt(d);
        coeff *= s;
        d = 1;
    }
}

mpq_class parse_decimal_literal(const std::string& s) {
    // Accepts [+-]digits[.digits][eE[+-]digits]; exact rational result.
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    mpz_class mant = 0;
    long frac_digits = 0;
    long exp10 = 0;
    bool any = false, dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            mant = mant * 10 + (c - '0');
            if (dot) ++frac_digits;
            any = true;
        } else if (c == '.' && !dot) {
            dot = true;
        } else if ((c == 'e' || c == 'E') && any) {
            exp10 = std::stol(s.substr(i + 1));
            break;
        } else {
            throw InvalidParam("bad decimal literal: " + s);
        }
    }
    if (!any) throw InvalidParam("bad decimal literal: " + s);
    long e = exp10 - frac_digits;
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(e >= 0 ? e : -e));
    mpq_class r = (e >= 0) ? mpq_class(mant * pow10) : mpq_class(mant, pow10);
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

mpz_class floor_q(const mpq_class& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

} // namespace

mpz_class isqrt(const mpz_class& n) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

Real Real::rational(mpz_class p, mpz_class q) {
    if (q == 0) throw InvalidParam("rational with zero denominator");
    Real r;
    r.kind_ = Kind::Rational;
    r.rat_ = mpq_class(p, q);
    r.rat_.canonicalize();
    return r;
}

Real Real::surd(mpz_class u, mpz_class v, mpz_class d, mpz_class w) {
    if (w == 0) throw InvalidParam("surd with zero denominator");
    if (d <= 0) throw InvalidParam("surd radicand must be positive");
    if (v != 0 && mpz_perfect_square_p(d.get_mpz_t()))
        throw InvalidParam("surd radicand must not be a perfect square");
    if (w < 0) { u = -u; v = -v; w = -w; }
    Real r;
    r.kind_ = Kind::Surd;
    r.u_ = std::move(u);
    r.v_ = std::move(v);
    r.d_ = std::move(d);
    r.w_ = std::move(w);
    return r;
}

Real Real::decimal(const std::string& digits, const std::string& err) {
    Real r;
    r.kind_ = Kind::Decimal;
    r.dec_val_ = parse_decimal_literal(digits);
    r.dec_err_ = parse_decimal_literal(err);
    if (r.dec_err_ < 0) throw InvalidParam("decimal error bound must be >= 0");
    return r;
}

Real Real::from_double(double x) {
    if (!std::isfinite(x)) throw InvalidParam("non-finite coefficient");
    mpq_class q(x); // exact binary expansion
    Real r;
    r.kind_ = Kind::Rational;
    r.rat_ = q;
    return r;
}

Interval Real::enclose(unsigned bits) const {
    switch (kind_) {
    case Kind::Rational:
        return {rat_, rat_};
    case Kind::Decimal:
        return {dec_val_ - dec_err_, dec_val_ + dec_err_};
    case Kind::Surd: {
        // sqrt(d) in [s, s+1]/2^bits with s = floor(sqrt(d*4^bits))
        mpz_class scale = pow2z(bits);
        mpz_class s = isqrt(d_ * scale * scale);
        mpq_class lo(s, scale), hi(s + 1, scale);
        lo.canonicalize();
        hi.canonicalize();
        mpq_class a, b;
        if (v_ >= 0) { a = u_ + v_ * lo; b = u_ + v_ * hi; }
        else         { a = u_ + v_ * hi; b = u_ + v_ * lo; }
        a /= w_;
        b /= w_;
        if (a > b) std::swap(a, b); // w sign already normalized, but be safe
        return {a, b};
    }
    }
    throw DomainError("unreachable real kind");
}

double Real::to_double() const {
    Interval iv = enclose(96);
    return mpq_class((iv.lo + iv.hi) / 2).get_d();
}

Frac128 Real::frac128() const {
    Interval iv = enclose(140);
    mpq_class mid = (iv.lo + iv.hi) / 2;
    mpz_class fl = floor_q(mid);
    mpq_class fr = mid - fl; // in [0,1)
    mpz_class scaled = floor_q(fr * mpq_class(pow2z(128)));
    if (scaled < 0) scaled = 0;
    mpz_class two64 = pow2z(64);
    mpz_class hi = scaled / two64, lo = scaled % two64;
    Frac128 f;
    f.hi = mpz_get_ui(hi.get_mpz_t()); // unsigned long is 64-bit on this platform
    f.lo = mpz_get_ui(lo.get_mpz_t());
    return f;
}

int Real::cmp(const mpq_class& r) const {
    LinearForm f(*this);
    return f.cmp(r);
}

std::string Real::serialize() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::Rational:
        os << "rational " << rat_.get_num() << " " << rat_.get_den();
        break;
    case Kind::Surd:
        os << "surd " << u_ << " " << v_ << " " << d_ << " " << w_;
        break;
    case Kind::Decimal: {
        os << "decimal " << dec_val_.get_num() << "/" << dec_val_.get_den()
           << " " << dec_err_.get_num() << "/" << dec_err_.get_den();
        break;
    }
    }
    return os.str();
}

namespace {
std::string next_token(const std::vector<std::string>& toks, std::size_t& pos,
                       const char* what) {
    if (pos >= toks.size())
        throw InvalidParam(std::string("expected ") + what + " in real spec");
    return toks[pos++];
}

mpz_class parse_z(const std::string& s) {
    try {
        return mpz_class(s);
    } catch (const std::invalid_argument&) {
        throw InvalidParam("bad integer token: " + s);
    }
}

mpq_class parse_q(const std::string& s) {
    // integer, P/Q, or decimal literal
    if (s.find('/') != std::string::npos) {
        try {
            mpq_class q(s);
            q.canonicalize();
            return q;
        } catch (const std::invalid_argument&) {
            throw InvalidParam("bad rational token: " + s);
        }
    }
    return parse_decimal_literal(s);
}
} // namespace

Real Real::parse_tokens(const std::vector<std::string>& toks, std::size_t& pos) {
    std::string head = next_token(toks, pos, "real kind");
    if (head == "rational") {
        mpz_class p = parse_z(next_token(toks, pos, "numerator"));
        mpz_class q = parse_z(next_token(toks, pos, "denominator"));
        return rational(p, q);
    }
    if (head == "surd") {
        mpz_class u = parse_z(next_token(toks, pos, "surd u"));
        mpz_class v = parse_z(next_token(toks, pos, "surd v"));
        mpz_class d = parse_z(next_token(toks, pos, "surd d"));
        mpz_class w = parse_z(next_token(toks, pos, "surd w"));
        return surd(u, v, d, w);
    }
    if (head == "decimal") {
        std::string digits = next_token(toks, pos, "decimal digits");
        std::string err = next_token(toks, pos, "decimal error");
        // Accept P/Q forms (used by round-trip serialization) as well.
        Real r;
        r.kind_ = Kind::Decimal;
        r.dec_val_ = parse_q(digits);
        r.dec_err_ = parse_q(err);
        if (r.dec_err_ < 0) throw InvalidParam("decimal error bound must be >= 0");
        return r;
    }
    // bare numeric literal -> exact rational
    --pos;
    std::string lit = next_token(toks, pos, "real literal");
    return [&] {
        Real r;
        r.kind_ = Kind::Rational;
        r.rat_ = parse_q(lit);
        return r;
    }();
}

Real Real::parse(const std::string& text) {
    std::istringstream is(text);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    std::size_t pos = 0;
    Real r = parse_tokens(toks, pos);
    if (pos != toks.size())
        throw InvalidParam("trailing tokens in real: " + text);
    return r;
}

// ---------------------------------------------------------------------------
// LinearForm

LinearForm::LinearForm(const Real& r, const mpz_class& scale) {
    add_scaled(r, scale);
}

void LinearForm::add_scaled(const Real& r, const mpz_class& scale) {
    switch (r.kind()) {
    case Real::Kind::Rational:
        rat_ += mpq_class(scale) * r.rat();
        return;
    case Real::Kind::Decimal: {
        rat_ += mpq_class(scale) * r.dec_value();
        err_ += mpq_class(abs(scale)) * r.dec_err();
        return;
    }
    case Real::Kind::Surd: {
        mpq_class w(r.sw());
        rat_ += mpq_class(scale) * mpq_class(r.su()) / w;
        mpq_class coeff = mpq_class(scale) * mpq_class(r.sv()) / w;
        if (coeff == 0) return;
        mpz_class d = r.sd();
        normalize_radicand(coeff, d);
        if (d == 1) { // radicand collapsed to a square
            rat_ += coeff;
            return;
        }
        for (auto& [c, rad] : surds_) {
            if (rad == d) {
                c += coeff;
                std::erase_if(surds_, [](const auto& t) { return t.first == 0; });
                return;
            }
        }
        surds_.emplace_back(coeff, d);
        return;
    }
    }
}

void LinearForm::add_rational(const mpq_class& r) { rat_ += r; }

Interval LinearForm::enclose(unsigned bits) const {
    mpq_class lo = rat_ - err_, hi = rat_ + err_;
    mpz_class scale = pow2z(bits);
    for (const auto& [c, d] : surds_) {
        mpz_class s = isqrt(d * scale * scale);
        mpq_class slo(s, scale), shi(s + 1, scale);
        slo.canonicalize();
        shi.canonicalize();
        if (c >= 0) { lo += c * slo; hi += c * shi; }
        else        { lo += c * shi; hi += c * slo; }
    }
    return {lo, hi};
}

mpz_class LinearForm::floor() const {
    if (is_exact_rational()) return floor_q(rat_);
    for (unsigned bits = 64; bits <= 4096; bits *= 2) {
        Interval iv = enclose(bits);
        mpz_class flo = floor_q(iv.lo), fhi = floor_q(iv.hi);
        if (flo == fhi) return flo;
        if (err_ != 0 && bits >= 256) break; // fixed uncertainty: no point refining
    }
    throw UncertifiableReal("floor undecidable at available precision");
}

int LinearForm::cmp(const mpq_class& r) const {
    if (is_exact_rational()) return ::cmp(rat_, r);
    for (unsigned bits = 64; bits <= 4096; bits *= 2) {
        Interval iv = enclose(bits);
        if (iv.lo > r) return 1;
        if (iv.hi < r) return -1;
        if (err_ != 0 && bits >= 256) break;
    }
    throw UncertifiableReal("comparison undecidable at available precision");
}

mpz_class floor_linear(const Real& alpha, const mpz_class& m, const Real& beta) {
    LinearForm f(alpha, m);
    f.add_scaled(beta, 1);
    return f.floor();
}

double frac_double(const Real& x) {
    LinearForm f(x);
    mpz_class fl = f.floor();
    Interval iv = f.enclose(96);
    mpq_class mid = (iv.lo + iv.hi) / 2 - fl;
    return mid.get_d();
}

} // namespace subconvex::exact
