// Thin string-driven bindings: expressions, polynomials, and exact reals
// travel as the same text the command-line tool accepts.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subconvex/arith.hpp"
#include "subconvex/equidist.hpp"
#include "subconvex/moments.hpp"
#include "subconvex/setexpr.hpp"
#include "subconvex/version.hpp"
#include "subconvex/weyl.hpp"

namespace py = pybind11;
using namespace subconvex;

PYBIND11_MODULE(subconvex, m) {
    m.doc() = "exponential-sum moment and equidistribution experiments";
    m.attr("__version__") = kToolVersion;

    py::register_exception<Error>(m, "SubconvexError");

    m.def("canonicalize", [](const std::string& expr) {
        return sets::SetExpr::parse(expr).serialize();
    }, py::arg("set"), "parse a set expression and return its canonical form");

    m.def("count_ladder", [](const std::string& expr,
                             const std::vector<std::uint64_t>& ns) {
        auto pts = sets::count_ladder(sets::SetExpr::parse(expr), ns);
        std::vector<std::tuple<std::uint64_t, std::uint64_t, double>> out;
        for (const auto& p : pts) out.emplace_back(p.n, p.count, p.density);
        return out;
    }, py::arg("set"), py::arg("scales"),
       "list of (N, count, density) along a scale ladder");

    m.def("young_exponent", [](double q, double r) -> py::object {
        auto v = sets::young_exponent(q, r);
        if (!v) return py::none();
        return py::float_(*v);
    }, py::arg("q"), py::arg("r"));

    m.def("moment", [](const std::string& expr, double p, std::uint64_t n,
                       std::uint64_t grid) {
        auto est = moments::moment_lp(
            sets::materialize(sets::SetExpr::parse(expr), n), p, grid);
        return py::make_tuple(est.value, est.refinement_delta, est.grid);
    }, py::arg("set"), py::arg("p"), py::arg("N"), py::arg("grid") = 0,
       "(value, refinement_delta, grid) for the p-th moment at scale N");

    m.def("discrete_moment", [](const std::string& expr, double p,
                                std::uint64_t n, std::uint64_t q) {
        return moments::discrete_moment(
            sets::materialize(sets::SetExpr::parse(expr), n), p, q);
    }, py::arg("set"), py::arg("p"), py::arg("N"), py::arg("q"));

    m.def("slope_fit", [](const std::string& expr, double p,
                          const std::vector<std::uint64_t>& scales) {
        auto fit = moments::subconvexity_fit(sets::SetExpr::parse(expr), p, scales);
        return py::make_tuple(fit.slope, fit.residual_rms);
    }, py::arg("set"), py::arg("p"), py::arg("scales"),
       "(slope, residual_rms) of log-moment against log-scale");

    m.def("sigma_exponent", &weyl::sigma_exponent, py::arg("k"), py::arg("p"));
    m.def("tau_exponent", &weyl::tau_exponent, py::arg("k"), py::arg("p"));
    m.def("omega_exponent", &weyl::omega_exponent, py::arg("k"), py::arg("p"));

    m.def("dirichlet_approx", [](const std::string& real, const std::string& q_cap) {
        weyl::RationalApprox ap =
            weyl::dirichlet_approx(exact::Real::parse(real), mpz_class(q_cap));
        return py::make_tuple(ap.a.get_str(), ap.q.get_str(),
                              ap.err_bound.get_d());
    }, py::arg("alpha"), py::arg("q_cap"),
       "(a, q, err_bound) with |alpha - a/q| <= err_bound and q <= q_cap");

    m.def("star_discrepancy", [](const std::string& expr, const std::string& poly,
                                 std::uint64_t m) {
        return equidist::star_discrepancy(equidist::frac_sequence(
            sets::SetExpr::parse(expr), weyl::PolyCoeffs::parse(poly), m));
    }, py::arg("set"), py::arg("poly"), py::arg("M"));

    m.def("gauss_sum_abs", [](std::uint64_t q, std::uint64_t t, long long a) {
        return std::abs(arith::gauss_sum(arith::dirichlet_char(q, t), a));
    }, py::arg("q"), py::arg("t"), py::arg("a"));

    m.def("restricted_average_abs", [](const std::string& fn,
                                       const std::string& expr,
                                       std::uint64_t n) {
        return std::abs(arith::restricted_average(
            arith::parse_fn(fn, n),
            sets::materialize(sets::SetExpr::parse(expr), n)));
    }, py::arg("fn"), py::arg("set"), py::arg("N"));
}
