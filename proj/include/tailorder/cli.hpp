#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tailorder/csv.hpp"
#include "tailorder/empirical.hpp"
#include "tailorder/monte_carlo.hpp"
#include "tailorder/order_analysis.hpp"
#include "tailorder/risk_measures.hpp"
#include "tailorder/spec_io.hpp"

namespace tailorder::cli {

enum ExitCode : int { ok = 0, input_error = 1, check_failed = 2 };

// ---------------------------------------------------------------------------
// Grid options shared by compare and grid
// ---------------------------------------------------------------------------

struct GridOptions {
    /// "lo:hi:n" for an evenly spaced t-grid; empty for quantile spacing.
    std::string t_grid;
    std::size_t t_quantiles = 99;
    std::size_t p_points = 512;
};

inline std::vector<double> parse_range(const std::string& text) {
    auto parts = csv::split(text, ':');
    if (parts.size() != 3) throw ParseError("t-grid must look like lo:hi:n, got \"" + text + "\"");
    auto lo = csv::parse_number(parts[0]);
    auto hi = csv::parse_number(parts[1]);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
    if (!lo || !hi || ec != std::errc{} || ptr != parts[2].data() + parts[2].size() || n == 0 || !(*hi >= *lo))
        throw ParseError("t-grid must look like lo:hi:n with lo <= hi and n >= 1, got \"" + text + "\"");
    return linear_grid(*lo, *hi, n);
}

inline std::vector<double> make_t_grid(const GridOptions& g, const DistributionSpec& x, const DistributionSpec& y) {
    if (!g.t_grid.empty()) return parse_range(g.t_grid);
    return default_t_grid(x, y, g.t_quantiles);
}

inline std::vector<double> make_p_grid(const GridOptions& g) { return chebyshev_grid(g.p_points); }

// ---------------------------------------------------------------------------
// Order names
// ---------------------------------------------------------------------------

/// "st", "hr", "mrl", "p-rl:<p>", "tvar-rl:<p0>" or "tvar-rl" (level taken
/// from the estimated p0; returned with level 0).
inline OrderKind parse_order(const std::string& text) {
    auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    std::optional<double> level;
    if (colon != std::string::npos) {
        level = csv::parse_number(text.substr(colon + 1));
        if (!level) throw ParseError("bad order level in \"" + text + "\"");
    }
    if (name == "st" && !level) return OrderKind::st();
    if (name == "hr" && !level) return OrderKind::hr();
    if (name == "mrl" && !level) return OrderKind::mrl();
    if (name == "p-rl" && level) return OrderKind::p_rl(*level);
    if (name == "tvar-rl" || name == "p0-tvar-rl") return OrderKind::tvar_rl(level.value_or(0.0));
    throw ParseError("unknown order \"" + text + "\" (expected st, hr, mrl, p-rl:<p>, tvar-rl[:<p0>])");
}

// ---------------------------------------------------------------------------
// Compare report
// ---------------------------------------------------------------------------

struct CompareReport {
    CompareReport(DistributionSpec x, DistributionSpec y) : x_spec(std::move(x)), y_spec(std::move(y)) {}

    DistributionSpec x_spec;
    DistributionSpec y_spec;
    P0Mode mode = P0Mode::conservative;
    std::vector<CrossingReport> per_t;
    /// Present iff feasible.
    std::optional<double> p0;
    double p0_resolution = 0.0;
    bool feasible = false;
    std::vector<OrderVerdict> verdicts;
};

namespace detail {

inline json opt_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> opt_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

inline Classification classification_from(const std::string& s) {
    if (s == "T1") return Classification::t1;
    if (s == "T2") return Classification::t2;
    if (s == "indeterminate") return Classification::indeterminate;
    throw ParseError("unknown classification \"" + s + "\"");
}

inline Direction direction_from(const std::string& s) {
    if (s == "minus-to-plus") return Direction::minus_to_plus;
    if (s == "plus-to-minus") return Direction::plus_to_minus;
    if (s == "none") return Direction::none;
    throw ParseError("unknown direction \"" + s + "\"");
}

inline const char* order_type_name(OrderKind::Type t) {
    switch (t) {
    case OrderKind::Type::st: return "st";
    case OrderKind::Type::hr: return "hr";
    case OrderKind::Type::mrl: return "mrl";
    case OrderKind::Type::p_rl: return "p-rl";
    default: return "p0-tvar-rl";
    }
}

inline OrderKind::Type order_type_from(const std::string& s) {
    if (s == "st") return OrderKind::Type::st;
    if (s == "hr") return OrderKind::Type::hr;
    if (s == "mrl") return OrderKind::Type::mrl;
    if (s == "p-rl") return OrderKind::Type::p_rl;
    if (s == "p0-tvar-rl") return OrderKind::Type::tvar_rl;
    throw ParseError("unknown order kind \"" + s + "\"");
}

} // namespace detail

inline json to_json(const CompareReport& r) {
    json per_t = json::array();
    for (const auto& c : r.per_t) {
        per_t.push_back({{"t", c.t},
                         {"classification", to_string(c.classification)},
                         {"sign_changes", c.sign_changes},
                         {"last_change_direction", to_string(c.last_change_direction)},
                         {"p_t", detail::opt_to_json(c.p_t)},
                         {"p_prime_t", detail::opt_to_json(c.p_prime_t)},
                         {"min_h", c.min_h},
                         {"zero_tol", c.zero_tol}});
    }
    json verdicts = json::array();
    for (const auto& v : r.verdicts) {
        json w = nullptr;
        if (v.violation_witness)
            w = {{"t", detail::opt_to_json(v.violation_witness->t)},
                 {"p", detail::opt_to_json(v.violation_witness->p)},
                 {"margin", v.violation_witness->margin}};
        verdicts.push_back({{"order_kind", detail::order_type_name(v.kind.type)},
                            {"level", v.kind.level},
                            {"holds", v.holds},
                            {"violation_witness", w},
                            {"t_points", v.t_points},
                            {"p_points", v.p_points}});
    }
    return {{"x_spec", tailorder::to_json(r.x_spec)},
            {"y_spec", tailorder::to_json(r.y_spec)},
            {"mode", to_string(r.mode)},
            {"feasible", r.feasible},
            {"p0", detail::opt_to_json(r.p0)},
            {"p0_resolution", r.p0_resolution},
            {"per_t", per_t},
            {"verdicts", verdicts}};
}

inline CompareReport compare_report_from_json(const json& j) {
    try {
        CompareReport r(spec_from_json(j.at("x_spec")), spec_from_json(j.at("y_spec")));
        const auto mode = j.at("mode").get<std::string>();
        if (mode != "exact" && mode != "conservative") throw ParseError("unknown mode \"" + mode + "\"");
        r.mode = mode == "exact" ? P0Mode::exact : P0Mode::conservative;
        r.feasible = j.at("feasible").get<bool>();
        r.p0 = detail::opt_from_json(j.at("p0"));
        r.p0_resolution = j.at("p0_resolution").get<double>();
        for (const auto& c : j.at("per_t")) {
            CrossingReport cr;
            cr.t = c.at("t").get<double>();
            cr.classification = detail::classification_from(c.at("classification").get<std::string>());
            cr.sign_changes = c.at("sign_changes").get<std::size_t>();
            cr.last_change_direction = detail::direction_from(c.at("last_change_direction").get<std::string>());
            cr.p_t = detail::opt_from_json(c.at("p_t"));
            cr.p_prime_t = detail::opt_from_json(c.at("p_prime_t"));
            cr.min_h = c.at("min_h").get<double>();
            cr.zero_tol = c.at("zero_tol").get<double>();
            r.per_t.push_back(cr);
        }
        for (const auto& v : j.at("verdicts")) {
            OrderVerdict ov;
            ov.kind = {detail::order_type_from(v.at("order_kind").get<std::string>()), v.at("level").get<double>()};
            ov.holds = v.at("holds").get<bool>();
            const auto& w = v.at("violation_witness");
            if (!w.is_null())
                ov.violation_witness = Witness{detail::opt_from_json(w.at("t")), detail::opt_from_json(w.at("p")),
                                               w.at("margin").get<double>()};
            ov.t_points = v.at("t_points").get<std::size_t>();
            ov.p_points = v.at("p_points").get<std::size_t>();
            r.verdicts.push_back(ov);
        }
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("compare report: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct CompareOptions {
    std::string x_file;
    std::string y_file;
    P0Mode mode = P0Mode::conservative;
    GridOptions grids;
    std::vector<std::string> orders;
    double tol = 1e-9;
    std::string json_out;
    bool per_t = false;
};

/// Runs the crossing analysis and the requested order checks. The report is
/// filled in even when a check fails.
inline CompareReport run_compare(const DistributionSpec& x, const DistributionSpec& y, const CompareOptions& o) {
    const auto ts = make_t_grid(o.grids, x, y);
    const auto ps = make_p_grid(o.grids);
    const auto est = estimate_p0(x, y, ts, ps, o.mode);

    CompareReport r(x, y);
    r.mode = o.mode;
    r.per_t = est.per_t;
    r.feasible = est.feasible;
    if (est.feasible) r.p0 = est.p0;
    r.p0_resolution = est.resolution;
    for (const auto& name : o.orders) {
        OrderKind k = parse_order(name);
        if (k.type == OrderKind::Type::tvar_rl && k.level == 0.0) {
            if (!r.p0) throw DomainError("order tvar-rl without a level needs a feasible p0 estimate");
            k.level = *r.p0;
        }
        r.verdicts.push_back(check_order(x, y, k, ts, ps, o.tol));
    }
    return r;
}

inline void print_report(const CompareReport& r, std::ostream& out, bool per_t) {
    std::size_t n1 = 0, n2 = 0, ni = 0;
    // Deductible attaining p0 (largest p_t or p'_t over T2).
    const CrossingReport* argmax = nullptr;
    double best = -1.0;
    for (const auto& c : r.per_t) {
        if (c.classification == Classification::t1) ++n1;
        else if (c.classification == Classification::t2) ++n2;
        else ++ni;
        if (c.classification != Classification::t2) continue;
        const auto v = r.mode == P0Mode::exact ? c.p_prime_t : c.p_t;
        if (v && *v > best) {
            best = *v;
            argmax = &c;
        }
    }
    out << std::setprecision(10);
    out << "X: " << tailorder::to_json(r.x_spec).dump() << '\n';
    out << "Y: " << tailorder::to_json(r.y_spec).dump() << '\n';
    out << "mode: " << to_string(r.mode) << '\n';
    out << "deductibles: " << r.per_t.size() << " (T1 " << n1 << ", T2 " << n2 << ", indeterminate " << ni << ")\n";
    if (r.p0) {
        out << "p0: " << *r.p0 << " +/- " << r.p0_resolution << '\n';
        if (argmax) out << "attained at t = " << argmax->t << '\n';
    } else {
        out << "p0: not determined (some deductibles are indeterminate)\n";
    }
    if (per_t) {
        out << "t,class,sign_changes,last_change,p_t,p_prime_t\n";
        for (const auto& c : r.per_t) {
            out << c.t << ',' << to_string(c.classification) << ',' << c.sign_changes << ','
                << to_string(c.last_change_direction) << ',' << (c.p_t ? csv::format(*c.p_t) : "") << ','
                << (c.p_prime_t ? csv::format(*c.p_prime_t) : "") << '\n';
        }
    }
    for (const auto& v : r.verdicts) {
        out << "order " << to_string(v.kind) << ": " << (v.holds ? "holds" : "fails");
        if (v.violation_witness) {
            const auto& w = *v.violation_witness;
            out << " (witness";
            if (w.t) out << " t=" << *w.t;
            if (w.p) out << " p=" << *w.p;
            out << " margin=" << w.margin << ')';
        }
        out << '\n';
    }
}

inline int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const auto x = load_spec(o.x_file);
        const auto y = load_spec(o.y_file);
        const auto r = run_compare(x, y, o);
        print_report(r, out, o.per_t);
        if (!o.json_out.empty()) {
            std::ofstream js(o.json_out);
            if (!js) throw ParseError("cannot write " + o.json_out);
            js << to_json(r).dump(2) << '\n';
        }
        bool all_hold = r.feasible;
        for (const auto& v : r.verdicts) all_hold = all_hold && v.holds;
        return all_hold ? ok : check_failed;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    }
}

struct GridCommandOptions {
    std::string x_file;
    std::string y_file;
    std::string out_csv;
    GridOptions grids;
};

inline int cmd_grid(const GridCommandOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const auto x = load_spec(o.x_file);
        const auto y = load_spec(o.y_file);
        const auto g = bivariate_grid(x, y, make_p_grid(o.grids), make_t_grid(o.grids, x, y));
        csv::write_grid(g, o.out_csv);
        out << "wrote " << g.t.size() << " x " << g.p.size() << " grid to " << o.out_csv << '\n';
        return ok;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    }
}

struct FitOptions {
    std::string data_csv;
    std::string column = "0";
    char delimiter = ',';
    std::string out_spec;
};

inline int cmd_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const auto col = csv::read_column(o.data_csv, o.column, o.delimiter);
        if (col.dropped > 0) err << "warning: dropped " << col.dropped << " non-numeric row(s)\n";
        if (col.values.empty()) throw DomainError("column " + o.column + " has no numeric values");
        const EmpiricalSample s(col.values, o.data_csv);
        const auto fit = fit_pareto_mle(s);
        out << std::setprecision(10);
        out << "n: " << s.size() << '\n';
        out << "k: " << fit.k << '\n';
        out << "a: " << fit.a << '\n';
        out << "ak/(a-1): " << fit.mean() << '\n';
        out << "loglik: " << fit.loglik << '\n';
        out << "KS: " << fit.ks << '\n';
        out << "spec: " << tailorder::to_json(fit.spec()).dump() << '\n';
        if (!o.out_spec.empty()) save_spec(fit.spec(), o.out_spec);
        return ok;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    }
}

struct PpPlotOptions {
    std::string x_csv;
    std::string y_csv;
    std::string out_csv;
    std::string x_column = "0";
    std::string y_column = "0";
    char delimiter = ',';
    StarShapeOptions star;
};

inline int cmd_ppplot(const PpPlotOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const auto cx = csv::read_column(o.x_csv, o.x_column, o.delimiter);
        const auto cy = csv::read_column(o.y_csv, o.y_column, o.delimiter);
        if (cx.dropped + cy.dropped > 0)
            err << "warning: dropped " << cx.dropped + cy.dropped << " non-numeric row(s)\n";
        if (cx.values.empty() || cy.values.empty()) throw DomainError("both samples need numeric values");
        const EmpiricalSample sx(cx.values, o.x_csv), sy(cy.values, o.y_csv);
        const auto plot = pp_plot(sx, sy);
        csv::write_pp(plot, o.out_csv);
        const auto star = star_shape_check(plot, o.star);
        out << "wrote " << plot.points.size() << " points to " << o.out_csv << '\n';
        out << "star-shaped (hr criterion): " << (star.star_shaped ? "yes" : "no") << '\n';
        if (!star.violations.empty()) {
            const auto& v = star.violations.front();
            out << "first violation: t in [" << v.t_begin << ", " << v.t_end << "], ratio " << v.ratio_begin << " -> "
                << v.ratio_end << " (z = " << v.z_score << "), " << star.violations.size() << " violation(s)\n";
        }
        return ok;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    }
}

struct MeasureOptions {
    std::string spec_file;
    double t = 0.0;
    double p = 0.5;
    std::size_t mc_samples = 0;
    std::uint64_t seed = 20190401;
};

inline int cmd_measure(const MeasureOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const auto spec = load_spec(o.spec_file);
        const auto d = describe(spec);
        out << std::setprecision(12);
        out << "spec: " << tailorder::to_json(spec).dump() << '\n';
        out << "support: [" << d.lower << ", " << d.upper << "]\n";
        out << "mean: " << d.mean << '\n';
        out << "VaR: " << quantile(spec, o.p) << '\n';
        if (d.mean.is_finite()) out << "TVaR: " << tvar(spec, o.p) << '\n';
        out << "VaR_t: " << residual_quantile(spec, o.t, o.p) << '\n';
        if (d.mean.is_finite()) {
            out << "TVaR_t: " << residual_tvar(spec, o.t, o.p) << '\n';
            out << "MRL: " << mean_residual_life(spec, o.t) << '\n';
            if (o.mc_samples > 0) {
                const auto mc = mc_residual_tvar(spec, o.t, o.p, o.mc_samples, o.seed);
                out << "TVaR_t (Monte Carlo): " << mc.estimate << " +/- " << mc.std_error << '\n';
            }
        } else {
            out << "TVaR_t: undefined (infinite mean)\n";
        }
        return ok;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    }
}

} // namespace tailorder::cli
