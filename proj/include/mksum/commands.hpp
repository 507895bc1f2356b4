#pragma once

// Command runners behind the command-line tool. Each returns the JSON report,
// the plot-ready CSV text and the exit status; the tool only parses flags and
// writes files. Reports leave out wall-clock times so that they depend only on
// (spec, config, version); times go to the CSV.

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mksum/audit.hpp"
#include "mksum/boundary.hpp"
#include "mksum/counterexamples.hpp"
#include "mksum/holes.hpp"
#include "mksum/layers.hpp"
#include "mksum/spec_io.hpp"

namespace mksum {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitExpectation = 2, kExitInfeasible = 3, kExitIo = 4 };

struct RunConfig {
    std::int64_t kmax = 4;
    Rational h0 = 0;  // 0: default for the dimension
    int refine = 4;
    double tol = 0.005;
    std::size_t cap = kDefaultCellCap;
    unsigned workers = 1;
    std::string out, csv;
    bool expect_monotone = false;
    // command parameters
    std::int64_t d = 2, k = 1, n = 8, trials = 10, resolution = 2048;
    std::uint64_t seed = 1;
    std::string shape = "disc";
    std::vector<Rational> a_values{3}, b_values{6};
    std::int64_t d1 = 4, d2 = 3;

    void validate() const {
        if (kmax < 2) throw InvalidArgument("kmax must be at least 2");
        if (h0 < 0) throw InvalidArgument("resolution must be positive");
        if (refine < 0) throw InvalidArgument("refine must be non-negative");
        if (workers < 1) throw InvalidArgument("workers must be at least 1");
        if (cap < 1) throw InvalidArgument("cap must be positive");
    }

    AuditOptions audit_options() const {
        AuditOptions o;
        o.kmax = kmax;
        o.h0 = h0;
        o.refine = refine;
        o.bounds.cap = cap;
        o.bounds.workers = workers;
        return o;
    }

    /// Everything that influences results (output paths and workers excluded).
    Json to_json() const {
        Json j;
        j["kmax"] = kmax;
        j["res"] = to_string(h0);
        j["refine"] = refine;
        j["tol"] = tol;
        j["cap"] = cap;
        j["expect_monotone"] = expect_monotone;
        j["d"] = d;
        j["k"] = k;
        j["n"] = n;
        j["trials"] = trials;
        j["resolution"] = resolution;
        j["seed"] = seed;
        j["shape"] = shape;
        j["a"] = Json::array();
        for (const auto& a : a_values) j["a"].push_back(to_string(a));
        j["b"] = Json::array();
        for (const auto& b : b_values) j["b"].push_back(to_string(b));
        j["d1"] = d1;
        j["d2"] = d2;
        return j;
    }
};

struct CommandResult {
    Json report;
    std::string csv;
    int exit = kExitOk;
};

inline Json make_report(const std::string& command, const RunConfig& cfg, Json entries, Json flags) {
    return Json{{"command", command}, {"config", cfg.to_json()}, {"entries", std::move(entries)},
                {"flags", std::move(flags)}, {"version", kVersion}};
}

inline Json bound_json(const VolumeBound& b) {
    return Json{{"lower", to_string(b.lower)}, {"upper", to_string(b.upper)},
                {"lower_value", to_double(b.lower)}, {"upper_value", to_double(b.upper)}};
}

/// 2 when a violation was certified under --expect-monotone, 3 when no step finished.
inline int audit_exit_code(const AuditReport& rep, bool expect_monotone) {
    if (expect_monotone && rep.count(Verdict::violation) > 0) return kExitExpectation;
    if (rep.infeasible()) return kExitInfeasible;
    return kExitOk;
}

inline Json audit_entries_json(const AuditReport& rep) {
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
        Json j = bound_json(e.bound);
        j["k"] = e.k;
        j["h"] = to_string(e.h);
        j["verdict"] = e.verdict ? Json(to_string(*e.verdict)) : Json(nullptr);
        j["hausdorff"] = e.hausdorff >= 0 ? Json(e.hausdorff) : Json(nullptr);
        if (!e.error.empty()) j["error"] = e.error;
        entries.push_back(std::move(j));
    }
    return entries;
}

inline Json audit_flags_json(const AuditReport& rep) {
    return Json{{"certified_nondecreasing", rep.count(Verdict::nondecreasing)},
                {"certified_violation", rep.count(Verdict::violation)},
                {"inconclusive", rep.count(Verdict::inconclusive)},
                {"dim_deficient", rep.dim_deficient},
                {"hull_reached", rep.hull_reached},
                {"hausdorff_slack", rep.hausdorff_slack},
                {"volume_factor", to_string(rep.volume_factor)},
                {"infeasible", rep.infeasible()}};
}

/// CSV with columns k, lower, upper, verdict, hausdorff, seconds.
inline std::string audit_csv(const AuditReport& rep) {
    std::ostringstream os;
    os.precision(17);
    os << "k,lower,upper,verdict,hausdorff,seconds\n";
    for (const auto& e : rep.entries) {
        os << e.k << ',' << to_double(e.bound.lower) << ',' << to_double(e.bound.upper) << ','
           << (e.verdict ? to_string(*e.verdict) : "") << ',';
        if (e.hausdorff >= 0) os << e.hausdorff;
        os << ',' << e.seconds << '\n';
    }
    return os.str();
}

inline CommandResult run_audit(const SetSpec& spec, const RunConfig& cfg) {
    cfg.validate();
    auto rep = audit_monotonicity(spec, cfg.audit_options());
    Json flags = audit_flags_json(rep);
    flags["kind"] = spec.kind();
    return {make_report("audit", cfg, audit_entries_json(rep), flags), audit_csv(rep),
            audit_exit_code(rep, cfg.expect_monotone)};
}

inline CommandResult run_simplex_exact(const RunConfig& cfg) {
    cfg.validate();
    Json entries = Json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "k,volume,deficit\n";
    Rational full = Rational(1) / Rational(factorial(cfg.d));
    bool nondecreasing = true;
    Rational prev = -1;
    for (std::int64_t k = 1; k <= cfg.kmax; ++k) {
        Rational v = simplex_spider_volume(cfg.d, k);
        nondecreasing = nondecreasing && v >= prev;
        prev = v;
        entries.push_back({{"k", k}, {"volume", to_string(v)}, {"value", to_double(v)}, {"deficit", to_string(full - v)}});
        csv << k << ',' << to_double(v) << ',' << to_double(full - v) << '\n';
    }
    int code = cfg.expect_monotone && !nondecreasing ? kExitExpectation : kExitOk;
    return {make_report("simplex-exact", cfg, entries, {{"nondecreasing", nondecreasing}, {"hull_volume", to_string(full)}}),
            csv.str(), code};
}

inline CommandResult run_layers(const RunConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    Json entries = Json::array();
    std::ostringstream csv;
    csv << "trial,cells_checked,cell_violations,layers_hold,volume_ok,stability_ok,delta\n";
    bool all = true;
    for (std::int64_t t = 0; t < cfg.trials; ++t) {
        GridSet m = random_sandwich(cfg.d, cfg.k, cfg.n, 0.5, rng);
        auto r = layer_inequality_check(cfg.d, cfg.k, cfg.n, m, cfg.cap, cfg.workers);
        bool layers = true;
        Json lj = Json::array();
        for (const auto& l : r.layers) {
            layers = layers && l.holds;
            lj.push_back({{"t", l.t}, {"sum_mu", to_string(l.sum_mu)}, {"sum_lambda", to_string(l.sum_lambda)},
                          {"factor", to_string(l.factor)}, {"holds", l.holds}});
        }
        all = all && r.all_hold();
        Json e{{"trial", t},
               {"layers", lj},
               {"cells_checked", r.cells_checked},
               {"cell_violations", r.cell_violations},
               {"weights_ok", r.weights_ok},
               {"vol_m", to_string(r.vol_m)},
               {"vol_m_plus_b", to_string(r.vol_m_plus_b)},
               {"delta", to_string(r.delta)},
               {"volume_ok", r.volume_ok},
               {"stability_ok", r.stability_ok}};
        if (r.stability_constant) {
            e["stability_constant"] = to_string(*r.stability_constant);
            e["stability_rhs"] = to_string(r.stability_rhs);
        }
        entries.push_back(std::move(e));
        csv << t << ',' << r.cells_checked << ',' << r.cell_violations << ',' << layers << ',' << r.volume_ok << ','
            << r.stability_ok << ',' << to_double(r.delta) << '\n';
    }
    int code = cfg.expect_monotone && !all ? kExitExpectation : kExitOk;
    return {make_report("lemma2", cfg, entries, {{"all_hold", all}}), csv.str(), code};
}

inline CommandResult run_boundary(const RunConfig& cfg) {
    cfg.validate();
    Rational h = cfg.h0 == 0 ? Rational(1, 64) : cfg.h0;
    GridSet a;
    if (cfg.shape == "disc") a = disc_raster(Rational(1, 2), h);
    else if (cfg.shape == "square") a = square_raster(Rational(-1, 2), Rational(1, 2), h);
    else if (cfg.shape == "annulus") a = annulus_raster(Rational(1, 2), Rational(1, 4), h);
    else if (cfg.shape == "disconnected") a = disc_with_far_cell(Rational(1, 2), h);
    else throw InvalidArgument("unknown shape '" + cfg.shape + "' (disc, square, annulus, disconnected)");
    Json flags{{"shape", cfg.shape}};
    Json entries = Json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "shape,vol_aa,vol_ab,vol_bb,hausdorff_ab,hausdorff_bb,passes\n";
    try {
        auto r = boundary_sum_check(a, cfg.cap, cfg.workers);
        entries.push_back({{"vol_aa", to_string(r.vol_aa)},
                           {"vol_ab", to_string(r.vol_ab)},
                           {"vol_bb", to_string(r.vol_bb)},
                           {"hausdorff_ab", r.hausdorff_ab},
                           {"hausdorff_bb", r.hausdorff_bb},
                           {"hausdorff_limit", r.hausdorff_limit},
                           {"shell", to_string(r.shell)},
                           {"exterior_only", r.exterior_only}});
        flags["passes"] = r.passes;
        flags["rejected"] = false;
        csv << cfg.shape << ',' << to_double(r.vol_aa) << ',' << to_double(r.vol_ab) << ',' << to_double(r.vol_bb) << ','
            << r.hausdorff_ab << ',' << r.hausdorff_bb << ',' << r.passes << '\n';
    } catch (const InvalidArgument& e) {
        // report the sums with the full boundary anyway
        auto s = boundary_sums(a, boundary_cells(a), cfg.cap, cfg.workers);
        entries.push_back({{"vol_aa", to_string(s.aa.volume())},
                           {"vol_ab", to_string(s.ab.volume())},
                           {"vol_bb", to_string(s.bb.volume())}});
        flags["rejected"] = true;
        flags["reason"] = e.what();
        flags["passes"] = false;
        csv << cfg.shape << ',' << to_double(s.aa.volume()) << ',' << to_double(s.ab.volume()) << ','
            << to_double(s.bb.volume()) << ",,,0\n";
    }
    return {make_report("boundary", cfg, entries, flags), csv.str(), kExitOk};
}

inline CommandResult run_holes(const SetSpec& spec, const RunConfig& cfg) {
    cfg.validate();
    const auto* ph = std::get_if<PlanarHolesSpec>(&spec.body);
    if (!ph) throw InvalidArgument("holes needs a planar-holes set, got " + spec.kind());
    auto rep = holes_audit(*ph, cfg.audit_options());
    Json steps = Json::array();
    std::size_t certified = 0, violations = 0;
    for (const auto& c : rep.curve_steps) {
        steps.push_back({{"bite", c.bite}, {"k", c.k}, {"m", bound_json(c.m)}, {"m_plus", bound_json(c.m_plus)},
                         {"verdict", to_string(c.verdict)}, {"h", to_string(c.h)}});
        certified += c.verdict == Verdict::nondecreasing;
        violations += c.verdict == Verdict::violation;
    }
    Json flags = audit_flags_json(rep.audit);
    flags["curve_steps"] = steps;
    flags["curve_steps_certified"] = certified;
    int code = audit_exit_code(rep.audit, cfg.expect_monotone);
    if (cfg.expect_monotone && violations > 0) code = kExitExpectation;
    return {make_report("holes", cfg, audit_entries_json(rep.audit), flags), audit_csv(rep.audit), code};
}

inline CommandResult run_hausdorff(const SetSpec& spec, const RunConfig& cfg) {
    cfg.validate();
    std::vector<std::int64_t> ks;
    for (std::int64_t k = 1; k <= cfg.kmax; ++k) ks.push_back(k);
    Rational h = cfg.h0 == 0 ? Rational(1, 256) : cfg.h0;
    auto s = hausdorff_convergence(spec, ks, h, cfg.cap);
    Json entries = Json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "k,hausdorff\n";
    for (std::size_t i = 0; i < s.ks.size(); ++i) {
        entries.push_back({{"k", s.ks[i]}, {"hausdorff", s.values[i]}});
        csv << s.ks[i] << ',' << s.values[i] << '\n';
    }
    Json flags{{"slack", s.slack}, {"exponent", std::isnan(s.exponent) ? Json(nullptr) : Json(s.exponent)}};
    return {make_report("hausdorff", cfg, entries, flags), csv.str(), kExitOk};
}

inline Json gap_json(const BlockFamily& f, const GapResult& g) {
    return Json{{"a", to_string(f.a)},
                {"b", to_string(f.b)},
                {"d1", f.d1},
                {"d2", f.d2},
                {"v12", to_string(g.volumes.v12)},
                {"v13", to_string(g.volumes.v13)},
                {"v23", to_string(g.volumes.v23)},
                {"v123", to_string(g.volumes.v123)},
                {"gap", g.gap},
                {"gap_lower", to_double(g.lower)},
                {"gap_upper", to_double(g.upper)},
                {"certified_negative", g.certified_negative()},
                {"certified_positive", g.certified_positive()}};
}

inline std::string gap_csv_header() { return "a,b,d1,d2,v12,v13,v23,v123,gap\n"; }

inline std::string gap_csv_row(const BlockFamily& f, const GapResult& g) {
    std::ostringstream os;
    os.precision(17);
    os << to_string(f.a) << ',' << to_string(f.b) << ',' << f.d1 << ',' << f.d2 << ',' << to_string(g.volumes.v12) << ','
       << to_string(g.volumes.v13) << ',' << to_string(g.volumes.v23) << ',' << to_string(g.volumes.v123) << ',' << g.gap
       << '\n';
    return os.str();
}

inline CommandResult run_gap(const RunConfig& cfg) {
    BlockFamily f{cfg.a_values.at(0), cfg.b_values.at(0), cfg.d1, cfg.d2};
    auto g = block_family_gap(f);
    Json entries = Json::array({gap_json(f, g)});
    return {make_report("counterexample gap", cfg, entries, {{"certified_negative", g.certified_negative()}}),
            gap_csv_header() + gap_csv_row(f, g), kExitOk};
}

inline CommandResult run_sweep(const RunConfig& cfg) {
    Json entries = Json::array();
    std::string csv = gap_csv_header();
    std::size_t negative = 0;
    for (const auto& a : cfg.a_values)
        for (const auto& b : cfg.b_values) {
            BlockFamily f{a, b, cfg.d1, cfg.d2};
            auto g = block_family_gap(f);
            negative += g.certified_negative();
            entries.push_back(gap_json(f, g));
            csv += gap_csv_row(f, g);
        }
    return {make_report("sweep", cfg, entries, {{"certified_negative", negative}}), csv, kExitOk};
}

inline CommandResult run_measure_cube(const RunConfig& cfg) {
    auto r = cube_measure_check(cfg.d, cfg.k);
    Json entries = Json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "m,measure\n";
    for (auto [m, v] : std::vector<std::pair<std::int64_t, Rational>>{{2 * r.k, r.mu_even},
                                                                     {2 * r.k + 1, r.mu_odd},
                                                                     {r.d * r.k, r.mu_multiple},
                                                                     {r.d * r.k + 1, r.mu_next}}) {
        entries.push_back({{"m", m}, {"measure", to_string(v)}, {"value", to_double(v)}});
        csv << m << ',' << to_double(v) << '\n';
    }
    Json flags{{"vol_c", to_string(r.vol_c)},       {"expected", to_string(r.expected)},
               {"even_matches", r.even_matches},   {"odd_smaller", r.odd_smaller},
               {"multiple_matches", r.multiple_matches}, {"next_smaller", r.next_smaller}};
    return {make_report("counterexample measure-cube", cfg, entries, flags), csv.str(), kExitOk};
}

inline CommandResult run_measure_ellipse(const RunConfig& cfg) {
    auto r = ellipse_measure_check(std::max<std::int64_t>(cfg.k, 2), cfg.resolution);
    Json entries = Json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "m,ratio,lower,upper\n";
    for (auto [m, q] : std::vector<std::pair<std::int64_t, EllipseRatio>>{{r.k, r.ratio_k}, {r.k + 1, r.ratio_next}}) {
        entries.push_back({{"m", m}, {"ratio", q.estimate}, {"lower", q.lower}, {"upper", q.upper}});
        csv << m << ',' << q.estimate << ',' << q.lower << ',' << q.upper << '\n';
    }
    bool quarter = std::abs(r.ratio_k.estimate - 0.25) <= cfg.tol;
    bool drop = r.ratio_next.estimate < 0.25 - cfg.tol;
    Json flags{{"p2", to_string(r.ellipse.p2)},
               {"q2", to_string(r.ellipse.q2)},
               {"point", {to_string(r.point_x), to_string(r.point_y)}},
               {"point_form", to_string(r.point_form)},
               {"point_interior", r.point_interior},
               {"ratio_is_quarter", quarter},
               {"ratio_drops", drop}};
    return {make_report("counterexample measure-ellipse", cfg, entries, flags), csv.str(), kExitOk};
}

}  // namespace mksum
