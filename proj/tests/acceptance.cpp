// Acceptance runner: one PASS/FAIL line per criterion. With --criterion N only
// that criterion runs; the exit status is nonzero when any selected one fails.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "mksum/audit.hpp"
#include "mksum/boundary.hpp"
#include "mksum/combinatorics.hpp"
#include "mksum/counterexamples.hpp"
#include "mksum/edt.hpp"
#include "mksum/holes.hpp"
#include "mksum/layers.hpp"
#include "mksum/volume.hpp"

using namespace mksum;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. exact combinatorial identities for d <= 6, t <= 12
void exact_identities(Outcome& o) {
    std::size_t checks = 0;
    for (std::int64_t d = 1; d <= 6; ++d) {
        for (std::int64_t t = 0; t <= 12; ++t) {
            if (d >= 2) {
                BigInt s = 0;
                for (std::int64_t u = 0; u <= t; ++u) s += layer_count(d - 1, u);
                o.require(s == layer_count(d, t), "layer recurrence d=" + std::to_string(d) + " t=" + std::to_string(t));
            }
            o.require(Rational(t + d, t + 1) * Rational(layer_count(d, t)) == Rational(layer_count(d, t + 1)),
                      "layer ratio d=" + std::to_string(d));
            for (const auto& i : enumerate_layer(d, t + 1))
                o.require(weight_sum_from_upper(i) == 1, "weights from upper");
            for (const auto& i : enumerate_layer(d, t))
                o.require(weight_sum_into_lower(i) == Rational(t + d, t + 1), "weights into lower");
            checks += 4;
        }
        for (std::int64_t j = 0; j <= 12 * d; ++j) {
            Rational t(j, 12);
            o.require(corner_volume(d, t) + corner_volume(d, d - t) == 1, "corner symmetry");
            if (t <= 1)
                o.require(corner_volume(d, t) == pow_int(t, static_cast<unsigned>(d)) / Rational(factorial(d)),
                          "corner small-t");
            ++checks;
        }
        for (std::int64_t k = d; k <= 12; ++k) {
            Rational s = 0;
            for (std::int64_t t = k - d + 1; t <= k - 1; ++t) s += corner_volume(d, Rational(k - t)) * Rational(layer_count(d, t));
            Rational rhs =
                (pow_int(Rational(k), static_cast<unsigned>(d)) - Rational(falling_factorial(k, d))) / Rational(factorial(d));
            o.require(s == rhs, "telescoping d=" + std::to_string(d) + " k=" + std::to_string(k));
            ++checks;
        }
    }
    o.detail << checks << " identity checks";
}

// 2. stability inequality and constants
void stability(Outcome& o) {
    std::size_t checks = 0;
    for (std::int64_t d = 3; d <= 10; ++d) {
        std::int64_t k0 = (d - 1) * (d - 2);
        for (std::int64_t k = k0; k <= k0 + 20; ++k) {
            BigInt lhs = BigInt(k - d + 2), kp = 1, kd = 1;
            for (std::int64_t i = 0; i < d - 1; ++i) kp *= BigInt(k + 1);
            for (std::int64_t i = 0; i < d; ++i) kd *= BigInt(k);
            o.require(lhs * kp > kd, "inequality d=" + std::to_string(d) + " k=" + std::to_string(k));
            o.require(stability_constant(d, k) > 0, "constant defined");
            ++checks;
        }
    }
    Rational c22 = stability_constant(2, 2), c32 = stability_constant(3, 2);
    o.require(c22 == 12, "C(2,2) = 12");
    o.require(c32 == 72, "C(3,2) = 72");
    o.detail << checks << " (d,k) pairs; C(2,2)=" << to_string(c22) << " C(3,2)=" << to_string(c32);
}

// 3. axis spider ground truth
void spider_ground_truth(Outcome& o) {
    struct Case {
        std::int64_t d, k;
        Rational h;
    };
    for (const Case& c : {Case{2, 2, Rational(1, 128)}, Case{2, 3, Rational(1, 128)}, Case{2, 4, Rational(1, 128)},
                          Case{3, 3, Rational(1, 24)}, Case{3, 4, Rational(1, 24)}}) {
        auto t0 = std::chrono::steady_clock::now();
        Rational truth = Rational(binomial(c.k, c.d)) / pow_int(Rational(c.k), static_cast<unsigned>(c.d));
        auto r = kfold_volume_bounds(Spider::axis(static_cast<std::size_t>(c.d)), c.k, c.h);
        double sec = seconds_since(t0);
        std::string tag = "(" + std::to_string(c.d) + "," + std::to_string(c.k) + ")";
        o.require(r.bound.lower <= truth && truth <= r.bound.upper, tag + " brackets");
        o.require(r.bound.upper - r.bound.lower <= Rational(15, 100) * truth, tag + " gap <= 15%");
        o.require(sec < 60, tag + " time");
        o.detail << tag << " [" << to_double(r.bound.lower) << "," << to_double(r.bound.upper) << "] vs "
                 << to_double(truth) << " " << sec << "s; ";
    }
}

Spider random_spider(std::mt19937_64& rng, std::size_t d) {
    std::uniform_int_distribution<int> c(-8, 8);
    std::uniform_int_distribution<int> m(static_cast<int>(d), d == 2 ? 5 : 4);
    while (true) {
        Spider s{zero_point(d), {}};
        for (int i = m(rng); i > 0; --i) {
            Point p;
            for (std::size_t j = 0; j < d; ++j) p.push_back(Rational(c(rng), 8));
            s.tips.push_back(p);
        }
        try {
            s.validate();
            return s;
        } catch (const InvalidArgument&) {
        }
    }
}

// 4. randomized spider audits, steps k = 2..5
void spider_audits(Outcome& o) {
    std::mt19937_64 rng(12345);
    std::size_t certified = 0, steps = 0, violations = 0;
    for (std::size_t d : {2u, 3u}) {
        int trials = d == 2 ? 10 : 5;
        for (int t = 0; t < trials; ++t) {
            Spider s = random_spider(rng, d);
            AuditOptions opt;
            opt.kmax = 6;
            auto rep = audit_monotonicity(SetSpec{d, SpiderSpec{s.apex, s.tips}}, opt);
            violations += rep.count(Verdict::violation);
            for (const auto& e : rep.entries) {
                if (e.k < 2 || e.k > 5) continue;
                ++steps;
                bool ok = e.verdict && *e.verdict == Verdict::nondecreasing;
                certified += ok;
                o.require(ok, "d=" + std::to_string(d) + " trial " + std::to_string(t) + " k=" + std::to_string(e.k));
            }
        }
    }
    o.require(violations == 0, "no certified violations");
    o.detail << certified << "/" << steps << " steps certified, " << violations << " violations";
}

// 5. layer inequalities on random sandwiched sets
void layer_verifier(Outcome& o) {
    std::mt19937_64 rng(2024);
    struct Case {
        std::int64_t d, k, n;
    };
    for (const Case& c : {Case{2, 4, 8}, Case{3, 2, 4}, Case{3, 3, 4}}) {
        std::size_t ok = 0;
        for (int t = 0; t < 10; ++t) {
            auto r = layer_inequality_check(c.d, c.k, c.n, random_sandwich(c.d, c.k, c.n, 0.5, rng));
            bool layers = true;
            for (const auto& l : r.layers) layers = layers && l.holds;
            o.require(r.cell_violations == 0, "per-cell inequality");
            o.require(layers, "per-layer inequality");
            o.require(r.stability_ok, "stability clause");
            ok += r.all_hold();
        }
        o.detail << "(" << c.d << "," << c.k << ") " << ok << "/10 hold; ";
    }
}

// 6. boundary sums at h = 1/128
void boundary_identities(Outcome& o) {
    const Rational h(1, 128);
    const Rational r(1, 2);
    for (auto [name, a] : std::vector<std::pair<std::string, GridSet>>{
             {"disc", disc_raster(r, h)},
             {"square", square_raster(-r, r, h)},
             {"annulus", annulus_raster(r, Rational(1, 4), h)}}) {
        auto rep = boundary_sum_check(a);
        o.require(rep.passes, name);
        o.detail << name << " dH " << std::max(rep.hausdorff_ab, rep.hausdorff_bb) << "<=" << rep.hausdorff_limit
                 << " dV " << to_double(rep.vol_aa - rep.vol_bb) << "<=" << to_double(rep.shell) << "; ";
    }
    GridSet bad = disc_with_far_cell(r, h);
    bool rejected = false;
    try {
        boundary_sum_check(bad);
    } catch (const InvalidArgument&) {
        rejected = true;
    }
    auto s = boundary_sums(bad, boundary_cells(bad));
    o.require(rejected, "disconnected boundary rejected");
    o.require(s.bb.volume() < s.aa.volume(), "vol(dA+dA) < vol(A+A)");
    o.detail << "disconnected: rejected=" << rejected << " bb " << to_double(s.bb.volume()) << " < aa "
             << to_double(s.aa.volume());
}

PlanarHolesSpec unit_square_with(std::vector<Point> bite) {
    return PlanarHolesSpec{{point_from_ints({0, 0}), point_from_ints({1, 0}), point_from_ints({1, 1}), point_from_ints({0, 1})},
                           {std::move(bite)}};
}

// 7. square minus a boundary bite, square minus an interior hole
void holes_audits(Outcome& o) {
    auto p = [](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t e) { return Point{Rational(a, b), Rational(c, e)}; };
    std::vector<std::pair<std::string, PlanarHolesSpec>> specs{
        {"bite", unit_square_with({p(1, 2, 1, 5), p(1, 5, 6, 5), p(4, 5, 6, 5)})},
        {"hole", unit_square_with({p(3, 10, 3, 10), p(3, 5, 3, 10), p(3, 5, 11, 20), p(3, 10, 11, 20)})}};
    for (const auto& [name, spec] : specs) {
        AuditOptions opt;
        opt.kmax = 6;
        opt.h0 = Rational(1, 256);
        auto rep = holes_audit(spec, opt);
        std::size_t ok = 0;
        for (const auto& e : rep.audit.entries) {
            if (e.k < 2 || e.k > 5) continue;
            bool c = e.verdict && *e.verdict == Verdict::nondecreasing && e.h <= Rational(1, 256);
            ok += c;
            o.require(c, name + " k=" + std::to_string(e.k));
        }
        std::size_t curves = 0;
        for (const auto& c : rep.curve_steps) curves += c.verdict == Verdict::nondecreasing;
        o.detail << name << " " << ok << "/4 steps, curve steps " << curves << "/" << rep.curve_steps.size() << "; ";
    }
}

// 8. block family at (3, 6, 4, 3)
void block_family(Outcome& o) {
    BlockFamily f{3, 6, 4, 3};
    auto v = pairwise_sum_volumes(f);
    o.require(v.v12 == 1 && v.v13 == 216 && v.v23 == 81 && v.v123 == 598, "volumes (1, 216, 81, 598)");
    auto g = block_family_gap(f);
    o.require(g.certified_negative(), "certified negative");
    o.require(std::abs(g.gap - (-0.0216)) <= 1e-3, "gap near -0.0216");
    o.detail << "volumes (" << to_string(v.v12) << ", " << to_string(v.v13) << ", " << to_string(v.v23) << ", "
             << to_string(v.v123) << ") gap " << g.gap << " in [" << to_double(g.lower) << ", " << to_double(g.upper) << "]";
}

// 9. cube-window measure at k = 1
void cube_window(Outcome& o) {
    for (std::int64_t d : {2, 3}) {
        auto r = cube_measure_check(d, 1);
        o.require(r.even_matches, "d=" + std::to_string(d) + " even measure equals vol(C)/2^d");
        o.require(r.odd_smaller, "d=" + std::to_string(d) + " odd measure smaller");
        o.detail << "d=" << d << " m=2: " << to_string(r.mu_even) << " m=3: " << to_string(r.mu_odd) << " target "
                 << to_string(r.expected) << " (m=" << d << ": " << to_string(r.mu_multiple) << ", m=" << d + 1 << ": "
                 << to_string(r.mu_next) << "); ";
    }
}

// 10. ellipse ratio at k = 2, resolution 2048
void ellipse_window(Outcome& o) {
    auto r = ellipse_measure_check(2, 2048);
    o.require(std::abs(r.ratio_k.estimate - 0.25) <= 0.005, "ratio(2) = 0.25 +- 0.005");
    o.require(r.ratio_next.estimate < 0.245, "ratio(3) < 0.245");
    o.require(r.point_form == Rational(8, 9) && r.point_interior, "(1/3,1/3) interior");
    o.detail << "ratio(2) " << r.ratio_k.estimate << " [" << r.ratio_k.lower << "," << r.ratio_k.upper << "] ratio(3) "
             << r.ratio_next.estimate << " [" << r.ratio_next.lower << "," << r.ratio_next.upper << "] point form "
             << to_string(r.point_form);
}

GridSet random_mask(std::mt19937_64& rng, const std::vector<std::int64_t>& ext, double p) {
    GridSet g(GridFrame{zero_point(ext.size()), 1, ext}, GridMode::exact);
    std::bernoulli_distribution b(p);
    std::vector<std::int64_t> idx(ext.size());
    for (std::size_t f = 0; f < g.frame().cells(); ++f) {
        detail::unflatten(f, ext, idx);
        if (b(rng)) g.set(idx);
    }
    if (g.empty()) g.set(std::vector<std::int64_t>(ext.size(), 0));
    return g;
}

// 11. oracle equivalences
void oracles(Outcome& o) {
    std::mt19937_64 rng(99);
    std::size_t dt_masks = 0;
    for (const auto& ext : {std::vector<std::int64_t>{16, 16}, std::vector<std::int64_t>{8, 8, 8}})
        for (int t = 0; t < 100; ++t) {
            GridSet g = random_mask(rng, ext, t % 5 == 0 ? 0.02 : 0.1);
            std::vector<std::vector<std::int64_t>> on;
            g.for_each([&](const std::vector<std::int64_t>& i) { on.push_back(i); });
            auto dt = distance_transform(g);
            std::vector<std::int64_t> idx(ext.size());
            bool same = true;
            for (std::size_t f = 0; f < g.frame().cells(); ++f) {
                detail::unflatten(f, ext, idx);
                std::int64_t best = std::numeric_limits<std::int64_t>::max();
                for (const auto& c : on) {
                    std::int64_t s = 0;
                    for (std::size_t j = 0; j < idx.size(); ++j) s += (c[j] - idx[j]) * (c[j] - idx[j]);
                    best = std::min(best, s);
                }
                same = same && dt.squared[f] == best;
            }
            o.require(same, "distance transform mask " + std::to_string(dt_masks));
            ++dt_masks;
        }

    std::uniform_int_distribution<int> count(1, 5), c(0, 16);
    std::uniform_real_distribution<double> unit(0, 1);
    const int samples = 1000000;
    int within = 0;
    for (int fam = 0; fam < 20; ++fam) {
        std::size_t d = 1 + static_cast<std::size_t>(fam % 4);
        BoxUnion u;
        std::vector<std::vector<double>> lo, hi;
        for (int n = count(rng); n > 0; --n) {
            AxisBox b{zero_point(d), zero_point(d)};
            for (std::size_t j = 0; j < d; ++j) {
                int x = c(rng), y = c(rng);
                b.lo[j] = Rational(std::min(x, y), 16);
                b.hi[j] = Rational(std::max(x, y), 16);
            }
            lo.push_back(to_doubles(b.lo));
            hi.push_back(to_doubles(b.hi));
            u.push_back(b);
        }
        int hits = 0;
        std::vector<double> x(d);
        for (int s = 0; s < samples; ++s) {
            for (auto& v : x) v = unit(rng);
            for (std::size_t i = 0; i < u.size(); ++i) {
                bool in = true;
                for (std::size_t j = 0; j < d && in; ++j) in = lo[i][j] <= x[j] && x[j] <= hi[i][j];
                if (in) {
                    ++hits;
                    break;
                }
            }
        }
        double est = static_cast<double>(hits) / samples, v = to_double(box_union_volume(u));
        double sigma = std::sqrt(std::max(v * (1 - v), 1e-12) / samples);
        bool ok = std::abs(est - v) <= 3 * sigma + 1e-9;
        within += ok;
        o.require(ok, "box union family " + std::to_string(fam));
    }

    int sums = 0;
    for (int t = 0; t < 6; ++t) {
        GridSet a = t % 2 ? random_mask(rng, {5, 5, 5}, 0.15) : random_mask(rng, {7, 9}, 0.15);
        GridSet iter = a;
        for (std::int64_t k = 1; k <= 6; ++k) {
            if (k > 1) iter = dilate(iter, a);
            bool same = self_sum(a, k).same_cells(iter);
            sums += same;
            o.require(same, "self_sum k=" + std::to_string(k));
        }
    }
    o.detail << dt_masks << " distance transforms, " << within << "/20 box families within 3 sigma, " << sums
             << "/36 self sums";
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> all{
        {1, "exact identities", 5, exact_identities},
        {2, "stability constant", 1, stability},
        {3, "spider ground truth", 5 * 60, spider_ground_truth},
        {4, "randomized spider audits", 30 * 60, spider_audits},
        {5, "layer inequality verifier", 10 * 60, layer_verifier},
        {6, "boundary sum identities", 2 * 60, boundary_identities},
        {7, "plane sets with bites", 5 * 60, holes_audits},
        {8, "three-set block family", 1, block_family},
        {9, "cube-window measure", 60, cube_window},
        {10, "ellipse measure", 2 * 60, ellipse_window},
        {11, "oracle equivalences", 5 * 60, oracles},
    };
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);

    int failed = 0;
    for (const auto& c : all) {
        if (only && c.id != only) continue;
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        double sec = seconds_since(t0);
        if (sec > c.limit_seconds) {
            o.pass = false;
            o.detail << " [over time limit " << c.limit_seconds << "s]";
        }
        failed += !o.pass;
        std::cout << "criterion " << c.id << " (" << c.name << "): " << (o.pass ? "PASS" : "FAIL") << " in " << sec
                  << "s: " << o.detail.str() << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
