#pragma once

// Exact reproductions around sums of lower-dimensional star-shaped sets:
// unions of axis boxes and their volumes, the three-set block family with the
// cube-root style gap, and the two measure examples (cube window, ellipse).

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mksum/combinatorics.hpp"
#include "mksum/errors.hpp"
#include "mksum/rational.hpp"
#include "mksum/zonotope.hpp"

namespace mksum {

struct AxisBox {
    Point lo;
    Point hi;

    std::size_t dim() const { return lo.size(); }
    bool degenerate() const {
        for (std::size_t j = 0; j < lo.size(); ++j)
            if (lo[j] == hi[j]) return true;
        return false;
    }
    bool contains(const Point& p) const {
        for (std::size_t j = 0; j < lo.size(); ++j)
            if (p[j] < lo[j] || p[j] > hi[j]) return false;
        return true;
    }
    AxisBox operator+(const AxisBox& o) const { return AxisBox{lo + o.lo, hi + o.hi}; }
};

using BoxUnion = std::vector<AxisBox>;

inline constexpr std::size_t kBoxUnionCap = 20;

namespace detail {

inline void check_boxes(const BoxUnion& boxes) {
    if (boxes.empty()) return;
    const std::size_t d = boxes.front().dim();
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        if (boxes[i].lo.size() != d || boxes[i].hi.size() != d)
            throw InvalidArgument("box " + std::to_string(i) + " has a different dimension");
        for (std::size_t j = 0; j < d; ++j)
            if (boxes[i].hi[j] < boxes[i].lo[j]) throw InvalidArgument("box " + std::to_string(i) + " has lo > hi");
    }
}

// Coordinate compression: every compressed cell is inside or outside each box.
inline Rational compressed_union_volume(const BoxUnion& boxes) {
    check_boxes(boxes);
    BoxUnion full;
    for (const auto& b : boxes)
        if (!b.degenerate()) full.push_back(b);
    if (full.empty()) return 0;
    const std::size_t d = full.front().dim();
    std::vector<std::vector<Rational>> coords(d);
    for (const auto& b : full)
        for (std::size_t j = 0; j < d; ++j) {
            coords[j].push_back(b.lo[j]);
            coords[j].push_back(b.hi[j]);
        }
    for (auto& c : coords) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    // per axis and box: range of compressed slots covered
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> span(full.size(), std::vector<std::pair<std::size_t, std::size_t>>(d));
    for (std::size_t i = 0; i < full.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) {
            auto lo = std::lower_bound(coords[j].begin(), coords[j].end(), full[i].lo[j]) - coords[j].begin();
            auto hi = std::lower_bound(coords[j].begin(), coords[j].end(), full[i].hi[j]) - coords[j].begin();
            span[i][j] = {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
        }
    std::vector<std::size_t> idx(d, 0);
    Rational total = 0;
    while (true) {
        for (std::size_t i = 0; i < full.size(); ++i) {
            bool in = true;
            for (std::size_t j = 0; j < d && in; ++j) in = span[i][j].first <= idx[j] && idx[j] < span[i][j].second;
            if (in) {
                Rational v = 1;
                for (std::size_t j = 0; j < d; ++j) v *= coords[j][idx[j] + 1] - coords[j][idx[j]];
                total += v;
                break;
            }
        }
        std::size_t j = d;
        while (j > 0) {
            --j;
            if (++idx[j] + 1 < coords[j].size()) break;
            idx[j] = 0;
            if (j == 0) return total;
        }
    }
}

}  // namespace detail

/// Exact volume of a union of at most 20 axis boxes.
inline Rational box_union_volume(const BoxUnion& boxes) {
    if (boxes.size() > kBoxUnionCap)
        throw InvalidArgument("box union has " + std::to_string(boxes.size()) + " boxes, cap is 20");
    return detail::compressed_union_volume(boxes);
}

/// (U_1 + ... ) as a box union by distributing the sum over the unions.
inline BoxUnion sum_unions(const BoxUnion& u, const BoxUnion& v) {
    BoxUnion out;
    for (const auto& a : u)
        for (const auto& b : v) out.push_back(a + b);
    return out;
}

inline bool in_union(const BoxUnion& u, const Point& p) {
    for (const auto& b : u)
        if (b.contains(p)) return true;
    return false;
}

/// A1 = [0,1]^{d1} x {0}^{d2}, A2 = {0}^{d1} x [0,1]^{d2},
/// A3 = ([0,a]^{d1} x {0}^{d2}) u ({0}^{d1} x [0,b]^{d2}).
struct BlockFamily {
    Rational a, b;
    std::int64_t d1 = 1, d2 = 1;

    std::size_t dim() const { return static_cast<std::size_t>(d1 + d2); }

    void validate() const {
        if (d1 < 1 || d2 < 1) throw InvalidArgument("block family needs d1, d2 >= 1");
        if (a < 0 || b < 0) throw InvalidArgument("block family needs a, b >= 0");
    }

    AxisBox block(const Rational& s, bool first) const {
        AxisBox box{zero_point(dim()), zero_point(dim())};
        for (std::int64_t j = 0; j < (first ? d1 : d2); ++j) box.hi[static_cast<std::size_t>(first ? j : d1 + j)] = s;
        return box;
    }
    BoxUnion a1() const { return {block(1, true)}; }
    BoxUnion a2() const { return {block(1, false)}; }
    BoxUnion a3() const { return {block(a, true), block(b, false)}; }
};

struct PairwiseVolumes {
    Rational v12, v13, v23, v123;
};

inline PairwiseVolumes pairwise_sum_volumes(const BlockFamily& f) {
    f.validate();
    return {detail::compressed_union_volume(sum_unions(f.a1(), f.a2())),
            detail::compressed_union_volume(sum_unions(f.a1(), f.a3())),
            detail::compressed_union_volume(sum_unions(f.a2(), f.a3())),
            detail::compressed_union_volume(sum_unions(sum_unions(f.a1(), f.a2()), f.a3()))};
}

/// Closed forms of the pairwise volumes: (1, b^{d2}, a^{d1}, (a+1)^{d1} + (b+1)^{d2} - 1).
inline PairwiseVolumes pairwise_closed_form(const BlockFamily& f) {
    auto u1 = static_cast<unsigned>(f.d1), u2 = static_cast<unsigned>(f.d2);
    return {1, pow_int(f.b, u2), pow_int(f.a, u1), pow_int(f.a + 1, u1) + pow_int(f.b + 1, u2) - 1};
}

/// Rational enclosure [lo, hi] of v^{1/d}, hi - lo about 1e-12 relative.
struct RootInterval {
    Rational lo, hi;
};

inline RootInterval root_interval(const Rational& v, std::int64_t d) {
    if (v < 0) throw InvalidArgument("root of a negative number");
    if (v == 0) return {0, 0};
    const unsigned ud = static_cast<unsigned>(d);
    long double r = std::pow(static_cast<long double>(to_double(v)), 1.0L / static_cast<long double>(d));
    Rational lo = from_double(static_cast<double>(r * (1 - 1e-13L)));
    Rational hi = from_double(static_cast<double>(r * (1 + 1e-13L)));
    // widen until the enclosure is verified exactly
    for (int i = 0; i < 64 && pow_int(lo, ud) > v; ++i) lo = lo * Rational(999999, 1000000);
    for (int i = 0; i < 64 && pow_int(hi, ud) < v; ++i) hi = hi * Rational(1000001, 1000000);
    if (pow_int(lo, ud) > v || pow_int(hi, ud) < v) throw Error("root enclosure failed");
    return {lo, hi};
}

struct GapResult {
    PairwiseVolumes volumes;
    double gap = 0;
    Rational lower, upper;  // certified enclosure of the gap
    bool certified_negative() const { return upper < 0; }
    bool certified_positive() const { return lower > 0; }
};

/// v123^{1/d} - (v12^{1/d} + v13^{1/d} + v23^{1/d}) / 2 with d = d1 + d2.
inline GapResult block_family_gap(const BlockFamily& f) {
    GapResult g;
    g.volumes = pairwise_sum_volumes(f);
    const std::int64_t d = f.d1 + f.d2;
    auto r123 = root_interval(g.volumes.v123, d), r12 = root_interval(g.volumes.v12, d);
    auto r13 = root_interval(g.volumes.v13, d), r23 = root_interval(g.volumes.v23, d);
    g.lower = r123.lo - (r12.hi + r13.hi + r23.hi) / 2;
    g.upper = r123.hi - (r12.lo + r13.lo + r23.lo) / 2;
    double inv = 1.0 / static_cast<double>(d);
    g.gap = std::pow(to_double(g.volumes.v123), inv) -
            0.5 * (std::pow(to_double(g.volumes.v12), inv) + std::pow(to_double(g.volumes.v13), inv) +
                   std::pow(to_double(g.volumes.v23), inv));
    return g;
}

/// Membership of sampled points q in each box, and of the midpoints q/2: a
/// sampled check that the union is star-shaped with respect to the origin.
inline bool star_shaped_sampled(const BoxUnion& u, std::size_t samples_per_box, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> t(0, 1000);
    for (const auto& b : u)
        for (std::size_t s = 0; s < samples_per_box; ++s) {
            Point q(b.dim());
            for (std::size_t j = 0; j < b.dim(); ++j) q[j] = b.lo[j] + (b.hi[j] - b.lo[j]) * Rational(t(rng), 1000);
            if (!in_union(u, q)) return false;
            if (!in_union(u, Rational(1, 2) * q)) return false;
            if (!in_union(u, zero_point(b.dim()))) return false;
        }
    return true;
}

/// Every box has a degenerate side, so the union has volume zero.
inline bool lower_dimensional(const BoxUnion& u) {
    for (const auto& b : u)
        if (!b.degenerate()) return false;
    return true;
}

// ---- measure examples for the axis spider S ----

/// Full-dimensional boxes of (1/m) S[m] for the axis spider in dimension d.
inline BoxUnion staircase_boxes(std::int64_t d, std::int64_t m) {
    BoxUnion out;
    for (const auto& c : compositions(m, d)) {
        bool full = true;
        for (auto p : c.parts) full = full && p > 0;
        if (!full) continue;
        AxisBox b{zero_point(static_cast<std::size_t>(d)), zero_point(static_cast<std::size_t>(d))};
        for (std::size_t j = 0; j < c.parts.size(); ++j) b.hi[j] = Rational(c.parts[j], m);
        out.push_back(b);
    }
    return out;
}

/// mu(K) = vol(K cap C) with C = [-1/d, 1/d]^d, evaluated for K = (1/m) S[m].
inline Rational cube_measure(std::int64_t d, std::int64_t m) {
    Rational w(1, d);
    BoxUnion clipped;
    for (auto b : staircase_boxes(d, m)) {
        for (auto& x : b.hi) x = std::min(x, w);
        clipped.push_back(b);
    }
    return detail::compressed_union_volume(clipped);
}

struct CubeMeasureReport {
    std::int64_t d = 0, k = 0;
    Rational vol_c;
    Rational expected;  // vol(C) / 2^d
    Rational mu_even, mu_odd;  // m = 2k and m = 2k + 1
    bool even_matches = false;
    bool odd_smaller = false;
    // the same comparison at m = dk and dk + 1
    Rational mu_multiple, mu_next;
    bool multiple_matches = false, next_smaller = false;
};

inline CubeMeasureReport cube_measure_check(std::int64_t d, std::int64_t k) {
    if (d < 2 || d > 3) throw InvalidArgument("cube measure check supports d = 2, 3");
    if (k < 1) throw InvalidArgument("cube measure check needs k >= 1");
    CubeMeasureReport r;
    r.d = d;
    r.k = k;
    r.vol_c = pow_int(Rational(2, d), static_cast<unsigned>(d));
    r.expected = r.vol_c / pow_int(Rational(2), static_cast<unsigned>(d));
    r.mu_even = cube_measure(d, 2 * k);
    r.mu_odd = cube_measure(d, 2 * k + 1);
    r.even_matches = r.mu_even == r.expected;
    r.odd_smaller = r.mu_odd < r.mu_even;
    r.mu_multiple = cube_measure(d, d * k);
    r.mu_next = cube_measure(d, d * k + 1);
    r.multiple_matches = r.mu_multiple == r.expected;
    r.next_smaller = r.mu_next < r.mu_multiple;
    return r;
}

/// Axis-aligned ellipse x^2/p2 + y^2/q2 = 1 through (1 - 1/k, 0) and (1 - 2/k, 1/k).
struct Ellipse {
    Rational p2, q2;
    bool interior(const Rational& x, const Rational& y) const { return x * x / p2 + y * y / q2 < 1; }
    double area() const { return std::acos(-1.0) * std::sqrt(to_double(p2)) * std::sqrt(to_double(q2)); }
};

inline Ellipse ellipse_for(std::int64_t k) {
    if (k < 2) throw InvalidArgument("ellipse construction needs k >= 2");
    Rational x1 = 1 - Rational(1, k);
    Rational x2 = 1 - Rational(2, k), y2(1, k);
    Rational p2 = x1 * x1;
    Rational rest = 1 - x2 * x2 / p2;
    if (!(rest > 0)) throw InvalidArgument("the two points do not determine an ellipse");
    return {p2, y2 * y2 / rest};
}

struct EllipseRatio {
    double lower = 0, upper = 0, estimate = 0;
};

/// vol((1/m) S[m] cap E) / vol(E) on an n x n grid over [0, p] x [0, Y], Y >= q.
/// Cells inside both sets give the lower bound, cells meeting both the upper.
inline EllipseRatio ellipse_ratio(const Ellipse& e, std::int64_t m, std::int64_t n) {
    // p = num/den exactly (p2 is a rational square by construction)
    BigInt pn = numerator_of(e.p2), pd = denominator_of(e.p2);
    BigInt sp = boost::multiprecision::sqrt(pn), sd = boost::multiprecision::sqrt(pd);
    if (sp * sp != pn || sd * sd != pd) throw InvalidArgument("ellipse semi-axis p must be rational");
    const Rational p = Rational(sp) / Rational(sd);
    const Rational h = p / n;
    // rows needed to cover q
    double q = std::sqrt(to_double(e.q2));
    std::int64_t rows = static_cast<std::int64_t>(std::ceil(q / to_double(h))) + 1;
    // integer forms: x = i h, (i h)^2 / p2 = i^2 / n^2; (j h)^2 / q2 = j^2 p2 / (n^2 q2)
    // inside E:  i^2 * Q + j^2 * P <= n^2 * Q  with Q = num(q2)*den(p2)... scaled to integers
    Rational ratio = e.p2 / e.q2;  // j^2 coefficient relative to i^2
    const __int128 rn = to_int64(numerator_of(ratio)), rd = to_int64(denominator_of(ratio));
    const __int128 nn = n;
    auto in_e = [&](std::int64_t i, std::int64_t j) {  // corner (i h, j h) in the closed ellipse
        return static_cast<__int128>(i) * i * rd + static_cast<__int128>(j) * j * rn <= nn * nn * rd;
    };
    // staircase: x = i h = i p / n; m x = i * m * p / n
    const __int128 sn = to_int64(numerator_of(p)) * m, sdn = to_int64(denominator_of(p)) * n;
    auto ceil_div = [](__int128 a, __int128 b) { return (a + b - 1) / b; };
    auto floor_div = [](__int128 a, __int128 b) { return a / b; };
    auto stair_closed = [&](std::int64_t i, std::int64_t j) {  // (i h, j h) in the staircase
        __int128 a = std::max<__int128>(1, ceil_div(sn * i, sdn)), b = std::max<__int128>(1, ceil_div(sn * j, sdn));
        return a + b <= m;
    };
    auto stair_open = [&](std::int64_t i, std::int64_t j) {  // interior near (i h, j h) from above-right
        __int128 a = std::max<__int128>(1, floor_div(sn * i, sdn) + 1), b = std::max<__int128>(1, floor_div(sn * j, sdn) + 1);
        return a + b <= m;
    };
    std::int64_t inner = 0, outer = 0;
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < rows; ++j) {
            bool meets = in_e(i, j) && stair_open(i, j);
            if (!meets) continue;
            ++outer;
            if (in_e(i + 1, j + 1) && stair_closed(i + 1, j + 1)) ++inner;
        }
    double cell = to_double(h) * to_double(h);
    double area = e.area();
    EllipseRatio r;
    r.lower = static_cast<double>(inner) * cell / area;
    r.upper = static_cast<double>(outer) * cell / area;
    r.estimate = (r.lower + r.upper) / 2;
    return r;
}

struct EllipseReport {
    std::int64_t k = 0, resolution = 0;
    Ellipse ellipse;
    EllipseRatio ratio_k, ratio_next;
    Rational point_x, point_y;  // (1 - 2/(k+1), 1/(k+1))
    Rational point_form;        // x^2/p2 + y^2/q2
    bool point_interior = false;
};

inline EllipseReport ellipse_measure_check(std::int64_t k, std::int64_t resolution) {
    if (resolution < 1) throw InvalidArgument("resolution must be positive");
    EllipseReport r;
    r.k = k;
    r.resolution = resolution;
    r.ellipse = ellipse_for(k);
    r.ratio_k = ellipse_ratio(r.ellipse, k, resolution);
    r.ratio_next = ellipse_ratio(r.ellipse, k + 1, resolution);
    r.point_x = 1 - Rational(2, k + 1);
    r.point_y = Rational(1, k + 1);
    r.point_form = r.point_x * r.point_x / r.ellipse.p2 + r.point_y * r.point_y / r.ellipse.q2;
    r.point_interior = r.point_form < 1;
    return r;
}

}  // namespace mksum
