// Batch experiment driver. Each subcommand wraps exactly one library
// operation and emits a deterministic CSV (12 significant digits, LF rows)
// plus a key=value manifest sidecar when --out is given. Exit codes:
// 0 success, 1 compute error (error name on stderr), 2 usage error.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subconvex/arith.hpp"
#include "subconvex/csvio.hpp"
#include "subconvex/equidist.hpp"
#include "subconvex/moments.hpp"
#include "subconvex/parallel.hpp"
#include "subconvex/setexpr.hpp"
#include "subconvex/version.hpp"
#include "subconvex/weyl.hpp"

namespace {

using namespace subconvex;

// Ladder grammar: "start:end:xF" geometric, "start:end:+S" linear, plus
// comma-separated explicit lists and single values. Endpoints accept
// scientific notation (1e6).
std::vector<std::uint64_t> parse_ladder(const std::string& text) {
    auto to_u64 = [&](const std::string& s) -> std::uint64_t {
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size() || !(v >= 1.0) || v > 9e18)
                throw std::invalid_argument(s);
            return static_cast<std::uint64_t>(std::llround(v));
        } catch (const std::exception&) {
            throw InvalidParam("bad ladder value: " + s);
        }
    };

    std::vector<std::uint64_t> out;
    if (text.find(':') != std::string::npos) {
        std::size_t c1 = text.find(':');
        std::size_t c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw InvalidParam("ladder needs start:end:step, got: " + text);
        std::uint64_t start = to_u64(text.substr(0, c1));
        std::uint64_t end = to_u64(text.substr(c1 + 1, c2 - c1 - 1));
        std::string step = text.substr(c2 + 1);
        if (step.size() < 2 || (step[0] != 'x' && step[0] != '+'))
            throw InvalidParam("ladder step must be xFactor or +Step: " + step);
        if (start > end) throw InvalidParam("ladder start exceeds end");
        if (step[0] == 'x') {
            double f = 0;
            try { f = std::stod(step.substr(1)); } catch (...) { f = 0; }
            if (!(f > 1.0)) throw InvalidParam("geometric factor must be > 1");
            for (double v = static_cast<double>(start); v <= static_cast<double>(end) * (1 + 1e-12); v *= f) {
                std::uint64_t n = static_cast<std::uint64_t>(std::llround(v));
                if (out.empty() || n > out.back()) out.push_back(n);
            }
        } else {
            std::uint64_t s = to_u64(step.substr(1));
            if (s < 1) throw InvalidParam("linear step must be >= 1");
            for (std::uint64_t v = start; v <= end; v += s) out.push_back(v);
        }
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t comma = text.find(',', pos);
            std::string tok = text.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (tok.empty()) throw InvalidParam("empty ladder entry");
            out.push_back(to_u64(tok));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    if (out.empty()) throw InvalidParam("empty ladder");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1])
            throw InvalidParam("ladder must be strictly ascending");
    return out;
}

std::vector<double> parse_p_list(const std::string& text) {
    std::vector<double> ps;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            ps.push_back(v);
        } catch (const std::exception&) {
            throw InvalidParam("bad exponent: " + tok);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (ps.empty()) throw InvalidParam("no exponents given");
    std::sort(ps.begin(), ps.end());
    return ps;
}

std::uint64_t pow2_at_least(std::uint64_t v) {
    std::uint64_t m = 64;
    while (m < v) m <<= 1;
    return m;
}

struct Emitted {
    io::Csv csv;
    io::Csv aux;      // optional second schema (equidist statistics)
    bool has_aux = false;
};

void write_outputs(const Emitted& em, io::Manifest man, const std::string& out,
                   const std::string& aux_out, long long wall_ms) {
    std::string csv_text = em.csv.text();
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(io::fnv1a64(csv_text)));
    man.put("rows", std::to_string(em.csv.rows.size()));
    man.put("csv_fnv1a64", hash);
    std::string aux_text;
    if (em.has_aux && !aux_out.empty()) {
        aux_text = em.aux.text();
        std::snprintf(hash, sizeof hash, "%016llx",
                      static_cast<unsigned long long>(io::fnv1a64(aux_text)));
        man.put("aux_rows", std::to_string(em.aux.rows.size()));
        man.put("aux_csv_fnv1a64", hash);
    }
    man.put("wall_ms", std::to_string(wall_ms));

    if (out.empty()) {
        std::cout << csv_text;
        if (em.has_aux && !aux_out.empty()) io::write_file(aux_out, aux_text);
        return;
    }
    io::write_file(out, csv_text);
    io::write_file(out + ".manifest", man.text());
    if (em.has_aux && !aux_out.empty()) io::write_file(aux_out, aux_text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exponential-sum moment and equidistribution experiments"};
    app.require_subcommand(1);

    // ---- flags (shared storage; each subcommand binds the ones it uses)
    std::string set_text = "naturals";
    std::string ladder_text;
    std::string p_text = "1.5";
    std::string alpha_text;
    std::string poly_text;
    std::string fn_text = "mobius";
    std::string out_path;
    std::string weyl_out_path;
    std::uint64_t n_flag = 1024;
    std::uint64_t grid_factor = 32;
    std::uint64_t mmax = 8;
    std::uint64_t degree = 3;
    double epsilon = 0.1;

    CLI::App* c_set = app.add_subcommand("set-report", "count ladder for a set");
    c_set->add_option("--set", set_text, "set expression")->required();
    c_set->add_option("--ladder", ladder_text, "scale ladder")->required();
    c_set->add_option("--out", out_path, "CSV output path");

    CLI::App* c_mom = app.add_subcommand("moment-scan", "moment ladder scan");
    c_mom->add_option("--set", set_text, "set expression")->required();
    c_mom->add_option("--p", p_text, "moment exponent(s), comma separated");
    c_mom->add_option("--ladder", ladder_text, "scale ladder")->required();
    c_mom->add_option("--grid-factor", grid_factor, "grid = 2^ceil(log2(factor*N))");
    c_mom->add_option("--out", out_path, "CSV output path");

    CLI::App* c_dm = app.add_subcommand("discrete-moment",
                                        "rational-point moment scan");
    c_dm->add_option("--set", set_text, "set expression")->required();
    c_dm->add_option("--p", p_text, "moment exponent");
    c_dm->add_option("--N", n_flag, "scale")->required();
    c_dm->add_option("--q-ladder", ladder_text, "denominator ladder")->required();
    c_dm->add_option("--out", out_path, "CSV output path");

    CLI::App* c_weyl = app.add_subcommand("weyl-scan",
                                          "restricted sum vs bound envelope");
    c_weyl->add_option("--set", set_text, "set expression");
    c_weyl->add_option("--degree", degree, "phase degree k")->required();
    c_weyl->add_option("--p", p_text, "exponent p in [1,2)");
    c_weyl->add_option("--alpha", alpha_text, "leading coefficient")->required();
    c_weyl->add_option("--N", n_flag, "scale")->required();
    c_weyl->add_option("--epsilon", epsilon, "envelope epsilon");
    c_weyl->add_option("--out", out_path, "CSV output path");

    CLI::App* c_eq = app.add_subcommand("equidist",
                                        "discrepancy ladder for a phase");
    c_eq->add_option("--set", set_text, "set expression");
    c_eq->add_option("--poly", poly_text, "phase polynomial")->required();
    c_eq->add_option("--m-ladder", ladder_text, "sequence lengths")->required();
    c_eq->add_option("--mmax", mmax, "largest statistic frequency");
    c_eq->add_option("--out", out_path, "CSV output path (discrepancy rows)");
    c_eq->add_option("--weyl-out", weyl_out_path,
                     "CSV output path for per-frequency statistics");

    CLI::App* c_ar = app.add_subcommand("arith-avg",
                                        "restricted average with norms");
    c_ar->add_option("--fn", fn_text, "arithmetic function spec")->required();
    c_ar->add_option("--set", set_text, "set expression");
    c_ar->add_option("--N", n_flag, "scale")->required();
    c_ar->add_option("--p", p_text, "inequality exponent in [1,2)");
    c_ar->add_option("--grid-factor", grid_factor, "grid factor (>= 32)");
    c_ar->add_option("--out", out_path, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto t0 = std::chrono::steady_clock::now();
    bool inputs_ok = false; // payload errors before this flips are usage errors
    try {
        Emitted em;
        io::Manifest man;
        man.put("tool", "subconvex");
        man.put("version", kToolVersion);

        if (app.got_subcommand(c_set)) {
            sets::SetExpr expr = sets::SetExpr::parse(set_text);
            std::vector<std::uint64_t> ladder = parse_ladder(ladder_text);
            man.put("subcommand", "set-report");
            man.put("arg.set", set_text);
            man.put("arg.ladder", ladder_text);
            man.put("set_canonical", expr.serialize());
            inputs_ok = true;

            std::vector<sets::CountPoint> pts = sets::count_ladder(expr, ladder);
            em.csv.header = {"set_expr", "n", "count", "density"};
            std::string canon = expr.serialize();
            for (const sets::CountPoint& pt : pts)
                em.csv.row({canon, std::to_string(pt.n), std::to_string(pt.count),
                            io::fmt12(pt.density)});
        } else if (app.got_subcommand(c_mom)) {
            sets::SetExpr expr = sets::SetExpr::parse(set_text);
            std::vector<std::uint64_t> ladder = parse_ladder(ladder_text);
            std::vector<double> ps = parse_p_list(p_text);
            if (grid_factor < 4) throw InvalidParam("grid factor below 4");
            man.put("subcommand", "moment-scan");
            man.put("arg.set", set_text);
            man.put("arg.p", p_text);
            man.put("arg.ladder", ladder_text);
            man.put("arg.grid-factor", std::to_string(grid_factor));
            man.put("set_canonical", expr.serialize());
            inputs_ok = true;

            std::string canon = expr.serialize();
            // one materialization + FFT set per scale, shared across p
            struct Cell { std::uint64_t count; std::vector<moments::MomentEstimate> est; };
            std::vector<Cell> cells(ladder.size());
            parallel_for_index(ladder.size(), [&](std::size_t i) {
                sets::IndicatorSlice slice = sets::materialize(expr, ladder[i]);
                cells[i].count = slice.count();
                std::uint64_t grid = pow2_at_least(grid_factor * ladder[i]);
                for (double p : ps)
                    cells[i].est.push_back(moments::moment_lp(slice, p, grid));
            });
            em.csv.header = {"set_expr", "p",     "N",
                             "M",        "value", "refinement_delta",
                             "ratio_to_bound"};
            for (std::size_t pi = 0; pi < ps.size(); ++pi) {
                for (std::size_t i = 0; i < ladder.size(); ++i) {
                    const moments::MomentEstimate& est = cells[i].est[pi];
                    double bound = cells[i].count == 0
                                       ? 0.0
                                       : std::pow(double(cells[i].count), ps[pi]) /
                                             double(ladder[i]);
                    em.csv.row({canon, io::fmt12(ps[pi]), std::to_string(ladder[i]),
                                std::to_string(est.grid), io::fmt12(est.value),
                                io::fmt12(est.refinement_delta),
                                io::fmt12(bound > 0 ? est.value / bound : 0.0)});
                }
            }
        } else if (app.got_subcommand(c_dm)) {
            sets::SetExpr expr = sets::SetExpr::parse(set_text);
            std::vector<std::uint64_t> qs = parse_ladder(ladder_text);
            std::vector<double> ps = parse_p_list(p_text);
            if (ps.size() != 1) throw InvalidParam("discrete scan takes one exponent");
            double p = ps[0];
            man.put("subcommand", "discrete-moment");
            man.put("arg.set", set_text);
            man.put("arg.p", p_text);
            man.put("arg.N", std::to_string(n_flag));
            man.put("arg.q-ladder", ladder_text);
            man.put("set_canonical", expr.serialize());
            inputs_ok = true;

            sets::IndicatorSlice slice = sets::materialize(expr, n_flag);
            std::string canon = expr.serialize();
            std::vector<double> vals(qs.size());
            parallel_for_index(qs.size(), [&](std::size_t i) {
                vals[i] = moments::discrete_moment(slice, p, qs[i]);
            });
            em.csv.header = {"set_expr", "p", "N", "q", "value", "bound_ratio"};
            double nd = static_cast<double>(n_flag);
            for (std::size_t i = 0; i < qs.size(); ++i) {
                double bound = std::pow(nd, p - 1.0) +
                               std::pow(nd, p) / static_cast<double>(qs[i]);
                em.csv.row({canon, io::fmt12(p), std::to_string(n_flag),
                            std::to_string(qs[i]), io::fmt12(vals[i]),
                            io::fmt12(vals[i] / bound)});
            }
        } else if (app.got_subcommand(c_weyl)) {
            sets::SetExpr expr = sets::SetExpr::parse(set_text);
            exact::Real lead = exact::Real::parse(alpha_text);
            std::vector<double> ps = parse_p_list(p_text);
            if (ps.size() != 1) throw InvalidParam("scan takes one exponent");
            if (degree < 2 || degree > 16) throw InvalidParam("degree out of range");
            man.put("subcommand", "weyl-scan");
            man.put("arg.set", set_text);
            man.put("arg.degree", std::to_string(degree));
            man.put("arg.p", p_text);
            man.put("arg.alpha", alpha_text);
            man.put("arg.N", std::to_string(n_flag));
            man.put("arg.epsilon", io::fmt12(epsilon));
            man.put("set_canonical", expr.serialize());
            inputs_ok = true;

            sets::IndicatorSlice slice = sets::materialize(expr, n_flag);
            weyl::WeylBoundReport rep = weyl::weyl_bound_report(
                slice, static_cast<int>(degree), ps[0], lead, epsilon);
            em.csv.header = {"set_expr", "k",       "p",        "N",
                             "a",        "q",       "epsilon",  "omega",
                             "envelope", "observed_abs", "ratio"};
            em.csv.row({expr.serialize(), std::to_string(rep.k), io::fmt12(rep.p),
                        std::to_string(rep.n), rep.a.get_str(), rep.q.get_str(),
                        io::fmt12(rep.epsilon), io::fmt12(rep.omega),
                        io::fmt12(rep.envelope), io::fmt12(rep.observed_abs),
                        io::fmt12(rep.ratio)});
        } else if (app.got_subcommand(c_eq)) {
            sets::SetExpr expr = sets::SetExpr::parse(set_text);
            weyl::PolyCoeffs poly = weyl::PolyCoeffs::parse(poly_text);
            std::vector<std::uint64_t> ladder = parse_ladder(ladder_text);
            if (mmax < 1 || mmax > 4096) throw InvalidParam("mmax out of range");
            man.put("subcommand", "equidist");
            man.put("arg.set", set_text);
            man.put("arg.poly", poly_text);
            man.put("arg.m-ladder", ladder_text);
            man.put("arg.mmax", std::to_string(mmax));
            man.put("set_canonical", expr.serialize());
            inputs_ok = true;

            std::vector<equidist::EquidistReport> reps =
                equidist::equidist_experiment(expr, poly, ladder,
                                              static_cast<int>(mmax));
            std::string canon = expr.serialize();
            std::string pcanon = poly.serialize();
            em.csv.header = {"set_expr", "poly", "M", "star_discrepancy"};
            em.aux.header = {"set_expr", "poly", "M", "m", "weyl_stat"};
            em.has_aux = true;
            for (const equidist::EquidistReport& r : reps) {
                em.csv.row({canon, pcanon, std::to_string(r.m),
                            io::fmt12(r.star_disc)});
                for (const auto& [m, stat] : r.weyl_stats)
                    em.aux.row({canon, pcanon, std::to_string(r.m),
                                std::to_string(m), io::fmt12(stat)});
            }
        } else if (app.got_subcommand(c_ar)) {
            sets::SetExpr expr = sets::SetExpr::parse(set_text);
            std::vector<double> ps = parse_p_list(p_text);
            if (ps.size() != 1) throw InvalidParam("average takes one exponent");
            if (grid_factor < 32) throw InvalidParam("grid factor below 32");
            man.put("subcommand", "arith-avg");
            man.put("arg.fn", fn_text);
            man.put("arg.set", set_text);
            man.put("arg.N", std::to_string(n_flag));
            man.put("arg.p", p_text);
            man.put("arg.grid-factor", std::to_string(grid_factor));
            man.put("set_canonical", expr.serialize());
            inputs_ok = true;

            arith::ArithFn f = arith::parse_fn(fn_text, n_flag);
            sets::IndicatorSlice slice = sets::materialize(expr, n_flag);
            std::uint64_t grid = pow2_at_least(grid_factor * n_flag);
            arith::HfNorms norms = arith::hf_norms(f, grid);
            arith::HolderCheck chk = arith::holder_chain_check(f, slice, ps[0], grid);
            em.csv.header = {"fn",     "set_expr", "N",
                             "p",      "restricted_avg_abs", "hf_sup",
                             "hf_l2",  "bound_rhs", "ratio"};
            em.csv.row({f.label, expr.serialize(), std::to_string(n_flag),
                        io::fmt12(ps[0]), io::fmt12(chk.lhs),
                        io::fmt12(norms.sup_norm), io::fmt12(norms.l2_norm),
                        io::fmt12(chk.rhs),
                        io::fmt12(chk.rhs > 0 ? chk.lhs / chk.rhs : 0.0)});
        }

        auto t1 = std::chrono::steady_clock::now();
        long long wall_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        write_outputs(em, std::move(man), out_path, weyl_out_path, wall_ms);
        return 0;
    } catch (const Error& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return inputs_ok ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "Error: " << e.what() << "\n";
        return 1;
    }
}
