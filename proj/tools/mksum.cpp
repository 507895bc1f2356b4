// Command-line front end: parses flags, runs one command, writes the JSON
// report (stdout unless --out) and the CSV (only with --csv).

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mksum/commands.hpp"

using namespace mksum;

namespace {

std::vector<Rational> parse_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    if (out.empty()) throw InvalidArgument("empty list '" + text + "'");
    return out;
}

struct Flags {
    RunConfig cfg;
    std::string set, res, a = "3", b = "6";
};

void common_options(CLI::App* app, Flags& f) {
    app->add_option("--set", f.set, "set-spec JSON file");
    app->add_option("--kmax", f.cfg.kmax, "largest k");
    app->add_option("--res", f.res, "coarsest grid spacing, e.g. 1/64");
    app->add_option("--refine", f.cfg.refine, "number of halvings of the spacing");
    app->add_option("--tol", f.cfg.tol, "tolerance for grid-evaluated ratios");
    app->add_option("--cap", f.cfg.cap, "cell cap per grid");
    app->add_option("--workers", f.cfg.workers, "worker threads");
    app->add_option("--out", f.cfg.out, "report path");
    app->add_option("--csv", f.cfg.csv, "CSV path");
    app->add_flag("--expect-monotone", f.cfg.expect_monotone, "exit 2 on a certified violation");
    app->add_option("--seed", f.cfg.seed, "random seed");
}

SetSpec require_set(const Flags& f, bool volume) {
    if (f.set.empty()) throw InvalidArgument("--set is required");
    return load_spec(f.set, ParseOptions{volume});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minkowski-sum volume laboratory"};
    app.require_subcommand(1);
    Flags f;

    auto* audit = app.add_subcommand("audit", "certified monotonicity audit of vol((1/k) A[k])");
    auto* simplex = app.add_subcommand("simplex-exact", "exact volumes for the axis spider");
    auto* lemma2 = app.add_subcommand("lemma2", "layer inequalities on random sandwiched sets");
    auto* boundary = app.add_subcommand("boundary", "A+A against boundary sums on a raster");
    auto* holes = app.add_subcommand("holes", "area audit and curve steps for a plane set with bites");
    auto* hausdorff = app.add_subcommand("hausdorff", "Hausdorff distance to the hull for k = 1..kmax");
    auto* counter = app.add_subcommand("counterexample", "exact counterexample constructions");
    auto* gap = counter->add_subcommand("gap", "three-set block family gap");
    auto* cube = counter->add_subcommand("measure-cube", "cube-window measure of (1/m) S[m]");
    auto* ellipse = counter->add_subcommand("measure-ellipse", "ellipse ratio of (1/m) S[m]");
    counter->require_subcommand(1);
    auto* sweep = app.add_subcommand("sweep", "gap over lists of a and b");

    for (auto* c : {audit, simplex, lemma2, boundary, holes, hausdorff, gap, cube, ellipse, sweep}) common_options(c, f);
    for (auto* c : {simplex, lemma2, cube}) c->add_option("--d", f.cfg.d, "dimension");
    for (auto* c : {lemma2, cube, ellipse}) c->add_option("--k", f.cfg.k, "k");
    lemma2->add_option("--n", f.cfg.n, "cells per unit");
    lemma2->add_option("--trials", f.cfg.trials, "number of random sets");
    boundary->add_option("--shape", f.cfg.shape, "disc, square, annulus or disconnected");
    ellipse->add_option("--resolution", f.cfg.resolution, "cells per axis");
    for (auto* c : {gap, sweep}) {
        c->add_option("--a", f.a, sweep == c ? "comma-separated values of a" : "a");
        c->add_option("--b", f.b, sweep == c ? "comma-separated values of b" : "b");
        c->add_option("--d1", f.cfg.d1, "d1");
        c->add_option("--d2", f.cfg.d2, "d2");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CommandResult result;
    try {
        if (!f.res.empty()) f.cfg.h0 = parse_rational(f.res);
        f.cfg.a_values = parse_list(f.a);
        f.cfg.b_values = parse_list(f.b);
        f.cfg.validate();
        if (audit->parsed()) result = run_audit(require_set(f, true), f.cfg);
        else if (simplex->parsed()) result = run_simplex_exact(f.cfg);
        else if (lemma2->parsed()) result = run_layers(f.cfg);
        else if (boundary->parsed()) result = run_boundary(f.cfg);
        else if (holes->parsed()) result = run_holes(require_set(f, true), f.cfg);
        else if (hausdorff->parsed()) result = run_hausdorff(require_set(f, false), f.cfg);
        else if (gap->parsed()) result = run_gap(f.cfg);
        else if (cube->parsed()) result = run_measure_cube(f.cfg);
        else if (ellipse->parsed()) result = run_measure_ellipse(f.cfg);
        else if (sweep->parsed()) result = run_sweep(f.cfg);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const CellCapExceeded& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const Nonconvergence& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        std::string text = result.report.dump(2) + "\n";
        if (f.cfg.out.empty()) std::cout << text;
        else write_text_file(f.cfg.out, text);
        if (!f.cfg.csv.empty()) write_text_file(f.cfg.csv, result.csv);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return result.exit;
}
