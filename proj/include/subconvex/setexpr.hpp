#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "subconvex/exactreal.hpp"
#include "subconvex/slice.hpp"

namespace subconvex::sets {

// Expression tree describing an integer set. Materialization against a bound
// N is a pure function of (expr, N).
//
// Serialized grammar (whitespace-separated prefix form):
//   naturals
//   rfree R
//   beatty <real> <real>              (alpha, beta)
//   complement <e>
//   intersect <e> <e>
//   union <e> <e>
//   difference <e> <e>
//   affine Q A <e>                    (q*S + a, q >= 1, a integer)
//   perturb <e> <eRemove> <eAdd>
//   splice K  a1 b1 <e1> ... aK bK <eK>   (cuts partition (0,1], right-closed)
//   explicit K n1 ... nK              (sorted, positive)
// where <real> := rational P Q | surd U V D W | decimal VALUE ERR | literal
struct SetExpr {
    enum class Kind {
        Naturals, RFree, Beatty, Complement, Intersect, Union, Difference,
        Affine, Perturb, Splice, Explicit
    };

    Kind kind = Kind::Naturals;
    int r = 0;                                   // RFree
    std::optional<exact::Real> alpha, beta;      // Beatty
    long long q = 0, a = 0;                      // Affine
    std::vector<SetExpr> kids;
    std::vector<std::pair<mpq_class, mpq_class>> cuts; // Splice, aligned with kids
    std::vector<std::uint64_t> members;          // Explicit

    static SetExpr naturals();
    static SetExpr rfree(int r);
    static SetExpr beatty(exact::Real alpha, exact::Real beta);
    static SetExpr complement(SetExpr e);
    static SetExpr intersect(SetExpr a, SetExpr b);
    static SetExpr set_union(SetExpr a, SetExpr b);
    static SetExpr difference(SetExpr a, SetExpr b);
    static SetExpr affine(long long q, long long a, SetExpr e);
    static SetExpr perturb(SetExpr base, SetExpr remove, SetExpr add);
    static SetExpr splice(std::vector<SetExpr> parts,
                          std::vector<std::pair<mpq_class, mpq_class>> cuts);
    static SetExpr explicit_set(std::vector<std::uint64_t> members);

    static SetExpr parse(const std::string& text);
    std::string serialize() const;
};

// Materialize the indicator of expr ∩ [1, N].
IndicatorSlice materialize(const SetExpr& expr, std::uint64_t n);

struct CountPoint {
    std::uint64_t n;
    std::uint64_t count;
    double density;
};

std::vector<CountPoint> count_ladder(const SetExpr& expr,
                                     const std::vector<std::uint64_t>& ns);

// Lp interpolation exponent: 1/p = 1/q + 1/r - 1 on the strip where the
// interpolation applies (3/2 < 1/q + 1/r < 2, strictly). nullopt when the
// exponent relation is outside that window.
std::optional<double> young_exponent(double q, double r);

} // namespace subconvex::sets
