// tailorder: command-line front end for tail-risk comparison of loss models.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tailorder/cli.hpp"

namespace {

char delimiter_from(const std::string& s) {
    if (s == "tab" || s == "\\t") return '\t';
    if (s.size() != 1) throw CLI::ValidationError("--delimiter", "expected a single character or \"tab\"");
    return s.front();
}

void add_grid_flags(CLI::App* cmd, tailorder::cli::GridOptions& g) {
    auto* tg = cmd->add_option("--t-grid", g.t_grid, "Evenly spaced deductibles, lo:hi:n");
    cmd->add_option("--t-quantiles", g.t_quantiles, "Deductibles at n quantiles of each model")
        ->check(CLI::PositiveNumber)
        ->excludes(tg);
    cmd->add_option("--p-grid", g.p_points, "Number of Chebyshev points in (0,1)")
        ->check(CLI::Range(64, 1 << 20));
}

} // namespace

int main(int argc, char** argv) {
    using namespace tailorder::cli;

    CLI::App app{"Compare loss models by tail-based risk orders"};
    app.require_subcommand(1);

    CompareOptions compare;
    std::string mode = "conservative";
    auto* c = app.add_subcommand("compare", "Estimate p0 and check stochastic orders between two models");
    c->add_option("-x,--x", compare.x_file, "Spec file of the smaller risk X")->required();
    c->add_option("-y,--y", compare.y_file, "Spec file of the larger risk Y")->required();
    c->add_option("--mode", mode, "p0 estimate: conservative (up-crossing) or exact (tail-integral threshold)")
        ->check(CLI::IsMember({"conservative", "exact"}));
    add_grid_flags(c, compare.grids);
    c->add_option("--orders", compare.orders, "Orders to check: st hr mrl p-rl:<p> tvar-rl[:<p0>]")->delimiter(',');
    c->add_option("--tol", compare.tol, "Relative tolerance for order checks")->check(CLI::NonNegativeNumber);
    c->add_option("--json", compare.json_out, "Write the full report as JSON");
    c->add_flag("--per-t", compare.per_t, "Print the per-deductible classification table");

    GridCommandOptions grid;
    auto* g = app.add_subcommand("grid", "Export H_t(p) on a t x p grid as CSV");
    g->add_option("-x,--x", grid.x_file, "Spec file of X")->required();
    g->add_option("-y,--y", grid.y_file, "Spec file of Y")->required();
    g->add_option("-o,--out", grid.out_csv, "Output CSV (t,p,h)")->required();
    add_grid_flags(g, grid.grids);

    FitOptions fit;
    std::string fit_delim = ",";
    auto* f = app.add_subcommand("fit", "Fit a classical Pareto model by maximum likelihood");
    f->add_option("data", fit.data_csv, "CSV file with claim amounts")->required();
    f->add_option("-c,--column", fit.column, "Column name or 0-based index");
    f->add_option("-d,--delimiter", fit_delim, "Field delimiter");
    f->add_option("-o,--out", fit.out_spec, "Write the fitted spec as JSON");

    PpPlotOptions pp;
    std::string pp_delim = ",";
    auto* p = app.add_subcommand("ppplot", "Export the empirical survival P-P plot and test its star shape");
    p->add_option("-x,--x", pp.x_csv, "CSV sample of X")->required();
    p->add_option("-y,--y", pp.y_csv, "CSV sample of Y")->required();
    p->add_option("-o,--out", pp.out_csv, "Output CSV (t,sf_x,sf_y)")->required();
    p->add_option("--x-column", pp.x_column, "Column of X (name or 0-based index)");
    p->add_option("--y-column", pp.y_column, "Column of Y (name or 0-based index)");
    p->add_option("-d,--delimiter", pp_delim, "Field delimiter");
    p->add_option("--ratio-tol", pp.star.ratio_tolerance, "Relative decrease ignored as noise")
        ->check(CLI::NonNegativeNumber);
    p->add_option("--min-run", pp.star.min_run, "Consecutive decreases forming a violation");
    p->add_option("--z", pp.star.z, "Required drop in standard errors (0 disables)")->check(CLI::NonNegativeNumber);

    MeasureOptions measure;
    auto* m = app.add_subcommand("measure", "Print VaR, TVaR and residual-life measures of one model");
    m->add_option("spec", measure.spec_file, "Spec file")->required();
    m->add_option("-t,--t", measure.t, "Deductible");
    m->add_option("-p,--p", measure.p, "Probability level")->check(CLI::Range(0.0, 1.0));
    m->add_option("--mc", measure.mc_samples, "Also estimate TVaR_t by Monte Carlo with N samples");
    m->add_option("--seed", measure.seed, "Monte Carlo seed");

    try {
        app.parse(argc, argv);
        if (c->parsed()) {
            compare.mode = mode == "exact" ? tailorder::P0Mode::exact : tailorder::P0Mode::conservative;
            return cmd_compare(compare, std::cout, std::cerr);
        }
        if (g->parsed()) return cmd_grid(grid, std::cout, std::cerr);
        if (f->parsed()) {
            fit.delimiter = delimiter_from(fit_delim);
            return cmd_fit(fit, std::cout, std::cerr);
        }
        if (p->parsed()) {
            pp.delimiter = delimiter_from(pp_delim);
            return cmd_ppplot(pp, std::cout, std::cerr);
        }
        if (m->parsed()) return cmd_measure(measure, std::cout, std::cerr);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : input_error;
    }
    return input_error;
}
