#pragma once

// Exact planar convex polygons: hulls, Minkowski sums, half-plane clipping and
// convex differences, all over rationals.

#include <algorithm>
#include <vector>

#include "mksum/errors.hpp"
#include "mksum/rational.hpp"

namespace mksum {

struct Vec2 {
    Rational x;
    Rational y;

    bool operator==(const Vec2&) const = default;
    friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(const Rational& s, const Vec2& a) { return {s * a.x, s * a.y}; }
};

inline bool lex_less(const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

inline Rational cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Counter-clockwise convex polygon without repeated or collinear vertices.
/// Degenerate hulls have 1 (point) or 2 (segment) vertices.
using Polygon = std::vector<Vec2>;

inline Polygon convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    Polygon hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

inline Rational signed_area(const Polygon& p) {
    if (p.size() < 3) return 0;
    Rational s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& a = p[i];
        const auto& b = p[(i + 1) % p.size()];
        s += a.x * b.y - a.y * b.x;
    }
    return s / 2;
}

inline Rational area(const Polygon& p) { return abs_of(signed_area(p)); }

inline Polygon minkowski_sum(const Polygon& a, const Polygon& b) {
    std::vector<Vec2> pts;
    pts.reserve(a.size() * b.size());
    for (const auto& p : a)
        for (const auto& q : b) pts.push_back(p + q);
    return convex_hull(std::move(pts));
}

inline Polygon scaled(const Polygon& p, const Rational& s) {
    Polygon out;
    for (const auto& v : p) out.push_back(s * v);
    if (s < 0) return convex_hull(out);
    return s == 0 ? convex_hull(out) : out;
}

inline Polygon translated(const Polygon& p, const Vec2& t) {
    Polygon out;
    for (const auto& v : p) out.push_back(v + t);
    return out;
}

/// Half-plane a*x + b*y <= c.
struct HalfPlane {
    Rational a;
    Rational b;
    Rational c;
    Rational eval(const Vec2& p) const { return a * p.x + b * p.y - c; }
};

/// Closed half-plane to the left of the directed line p -> q.
inline HalfPlane left_of(const Vec2& p, const Vec2& q) {
    // (q - p) x (v - p) >= 0  <=>  -(dy) x + dx y <= ... rearranged as a x + b y <= c
    Rational dx = q.x - p.x, dy = q.y - p.y;
    return HalfPlane{dy, -dx, dy * p.x - dx * p.y};
}

/// Clip a convex polygon (given in any vertex count, including degenerate) by a half-plane.
inline Polygon clip(const Polygon& poly, const HalfPlane& h) {
    if (poly.empty()) return {};
    if (poly.size() == 1) return h.eval(poly[0]) <= 0 ? poly : Polygon{};
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& cur = poly[i];
        const Vec2& nxt = poly[(i + 1) % n];
        Rational fc = h.eval(cur), fn = h.eval(nxt);
        if (fc <= 0) out.push_back(cur);
        if ((fc < 0 && fn > 0) || (fc > 0 && fn < 0)) {
            Rational t = fc / (fc - fn);
            out.push_back(cur + t * (nxt - cur));
        }
        if (n == 2) break;
    }
    if (n == 2) {
        if (h.eval(poly[1]) <= 0) out.push_back(poly[1]);
    }
    return convex_hull(std::move(out));
}

inline std::vector<HalfPlane> edge_halfplanes(const Polygon& p) {
    std::vector<HalfPlane> hs;
    if (p.size() < 3) return hs;
    for (std::size_t i = 0; i < p.size(); ++i) hs.push_back(left_of(p[i], p[(i + 1) % p.size()]));
    return hs;
}

inline Polygon intersect(const Polygon& a, const Polygon& b) {
    if (b.size() < 3) throw InvalidArgument("intersect: clip polygon must be full-dimensional");
    Polygon out = a;
    for (const auto& h : edge_halfplanes(b)) {
        out = clip(out, h);
        if (out.empty()) break;
    }
    return out;
}

/// Closure of a \ b split into convex pieces of positive area.
inline std::vector<Polygon> subtract(const Polygon& a, const Polygon& b) {
    std::vector<Polygon> pieces;
    if (b.size() < 3) {
        if (a.size() >= 3) pieces.push_back(a);
        return pieces;
    }
    Polygon rest = a;
    for (const auto& h : edge_halfplanes(b)) {
        if (rest.size() < 3) break;
        HalfPlane outside{-h.a, -h.b, -h.c};
        Polygon part = clip(rest, outside);
        if (part.size() >= 3 && area(part) > 0) pieces.push_back(std::move(part));
        rest = clip(rest, h);
    }
    return pieces;
}

inline bool contains(const Polygon& p, const Vec2& v) {
    if (p.size() < 3) return false;
    for (const auto& h : edge_halfplanes(p))
        if (h.eval(v) > 0) return false;
    return true;
}

/// Exact area of a union of convex polygons: between consecutive abscissae of
/// vertices and edge crossings every cross-section is a fixed union of intervals
/// with linear endpoints, so the midpoint length times the width is exact.
inline Rational union_area(const std::vector<Polygon>& polys) {
    std::vector<std::pair<Vec2, Vec2>> edges;
    std::vector<Rational> xs;
    for (const auto& p : polys) {
        if (p.size() < 3) continue;
        for (std::size_t i = 0; i < p.size(); ++i) {
            edges.emplace_back(p[i], p[(i + 1) % p.size()]);
            xs.push_back(p[i].x);
        }
    }
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const auto& [a, b] = edges[i];
            const auto& [c, d] = edges[j];
            Vec2 r = b - a, q = d - c;
            Rational den = r.x * q.y - r.y * q.x;
            if (den == 0) continue;
            Vec2 ca = c - a;
            Rational t = (ca.x * q.y - ca.y * q.x) / den;
            Rational u = (ca.x * r.y - ca.y * r.x) / den;
            if (t > 0 && t < 1 && u > 0 && u < 1) xs.push_back(a.x + t * r.x);
        }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    Rational total = 0;
    for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
        Rational xm = (xs[s] + xs[s + 1]) / 2;
        std::vector<std::pair<Rational, Rational>> iv;
        for (const auto& p : polys) {
            if (p.size() < 3) continue;
            bool any = false;
            Rational lo, hi;
            for (std::size_t i = 0; i < p.size(); ++i) {
                const Vec2 &a = p[i], &b = p[(i + 1) % p.size()];
                if (a.x == b.x || xm < std::min(a.x, b.x) || xm > std::max(a.x, b.x)) continue;
                Rational y = a.y + (b.y - a.y) * (xm - a.x) / (b.x - a.x);
                if (!any) lo = hi = y;
                lo = std::min(lo, y);
                hi = std::max(hi, y);
                any = true;
            }
            if (any && hi > lo) iv.emplace_back(lo, hi);
        }
        std::sort(iv.begin(), iv.end());
        Rational len = 0;
        for (std::size_t i = 0; i < iv.size();) {
            Rational a = iv[i].first, b = iv[i].second;
            std::size_t j = i + 1;
            while (j < iv.size() && iv[j].first <= b) b = std::max(b, iv[j++].second);
            len += b - a;
            i = j;
        }
        total += len * (xs[s + 1] - xs[s]);
    }
    return total;
}

}  // namespace mksum
