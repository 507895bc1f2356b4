#pragma once

// Declarative compact sets and their decomposition into convex pieces.

#include <algorithm>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mksum/errors.hpp"
#include "mksum/pieces.hpp"
#include "mksum/polygon.hpp"
#include "mksum/zonotope.hpp"

namespace mksum {

struct SetSpec;

struct SpiderSpec {
    Point apex;
    std::vector<Point> tips;
    bool operator==(const SpiderSpec&) const = default;
};

struct HullSpec {
    std::vector<Point> points;
    bool operator==(const HullSpec&) const = default;
};

struct BoxSpec {
    Point lo;
    Point hi;
    bool operator==(const BoxSpec&) const = default;
};

struct BoxUnionSpec {
    std::vector<BoxSpec> boxes;
    bool operator==(const BoxUnionSpec&) const = default;
};

/// A convex polygon K with pairwise disjoint open convex bites removed.
struct PlanarHolesSpec {
    std::vector<Point> outer;
    std::vector<std::vector<Point>> bites;
    bool operator==(const PlanarHolesSpec&) const = default;
};

/// x -> matrix x + translation applied to an inner set.
struct AffineSpec {
    std::vector<Point> matrix;
    Point translation;
    std::shared_ptr<const SetSpec> inner;
    bool operator==(const AffineSpec& o) const;
};

struct SetSpec {
    std::size_t dim = 0;
    std::variant<SpiderSpec, HullSpec, BoxUnionSpec, PlanarHolesSpec, AffineSpec> body;

    std::string kind() const {
        static const char* names[] = {"spider", "hull", "box-union", "planar-holes", "affine"};
        return names[body.index()];
    }
    bool operator==(const SetSpec& o) const { return dim == o.dim && body == o.body; }
};

inline bool AffineSpec::operator==(const AffineSpec& o) const {
    if (matrix != o.matrix || translation != o.translation) return false;
    if (!inner || !o.inner) return inner == o.inner;
    return *inner == *o.inner;
}

inline Spider to_spider(const SpiderSpec& s) { return Spider{s.apex, s.tips}; }

inline Polygon to_polygon(const std::vector<Point>& pts) {
    std::vector<Vec2> v;
    for (const auto& p : pts) {
        if (p.size() != 2) throw InvalidArgument("polygon vertices must be planar");
        v.push_back(Vec2{p[0], p[1]});
    }
    return convex_hull(std::move(v));
}

inline Rational affine_determinant(const AffineSpec& a) {
    if (a.matrix.empty() || a.matrix.size() != a.matrix.front().size()) return 0;
    return detail::determinant(a.matrix);
}

namespace detail {

inline Polygon clip_slab(const Polygon& p, const Rational& xa, const Rational& xb) {
    Polygon c = clip(p, HalfPlane{-1, 0, -xa});
    return clip(c, HalfPlane{1, 0, xb});
}

// Cross-section [lo, hi] of a convex polygon at the line x = x0 (polygon within the slab, vertices on its sides).
inline bool cross_section(const Polygon& p, const Rational& x0, Rational& lo, Rational& hi) {
    bool any = false;
    for (const auto& v : p)
        if (v.x == x0) {
            if (!any) lo = hi = v.y;
            lo = std::min(lo, v.y);
            hi = std::max(hi, v.y);
            any = true;
        }
    return any;
}

inline void segment_crossings(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, std::vector<Rational>& xs) {
    Vec2 r = b - a, s = d - c;
    Rational den = r.x * s.y - r.y * s.x;
    if (den == 0) return;
    Vec2 ca = c - a;
    Rational t = (ca.x * s.y - ca.y * s.x) / den;
    Rational u = (ca.x * r.y - ca.y * r.x) / den;
    if (t < 0 || t > 1 || u < 0 || u > 1) return;
    xs.push_back(a.x + t * r.x);
}

// Number of connected arcs of the closed bite on the boundary of K.
inline int boundary_arcs(const Polygon& k, const Polygon& bite) {
    // midpoints of the boundary pieces between crossings, in cyclic order
    const std::size_t n = k.size();
    std::vector<bool> seq;
    for (std::size_t i = 0; i < n; ++i) {
        Polygon edge{k[i], k[(i + 1) % n]};
        std::vector<Rational> ts{0, 1};
        Vec2 d = edge[1] - edge[0];
        for (std::size_t j = 0; j < bite.size(); ++j) {
            const Vec2& c = bite[j];
            const Vec2& e = bite[(j + 1) % bite.size()];
            Vec2 s = e - c;
            Rational den = d.x * s.y - d.y * s.x;
            if (den == 0) continue;
            Vec2 ca = c - edge[0];
            Rational t = (ca.x * s.y - ca.y * s.x) / den;
            if (t > 0 && t < 1) ts.push_back(t);
        }
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        for (std::size_t q = 0; q + 1 < ts.size(); ++q) {
            Vec2 a = edge[0] + ts[q] * d, b = edge[0] + ts[q + 1] * d;
            Vec2 mid = Rational(1, 2) * (a + b);
            seq.push_back(contains(bite, mid));
        }
    }
    int runs = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (seq[i] && !seq[(i + seq.size() - 1) % seq.size()]) ++runs;
    if (runs == 0 && !seq.empty() && seq[0]) runs = 1;
    return runs;
}

inline std::vector<Polygon> merge_convex(std::vector<Polygon> polys) {
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < polys.size() && !merged; ++i)
            for (std::size_t j = i + 1; j < polys.size() && !merged; ++j) {
                std::vector<Vec2> all = polys[i];
                all.insert(all.end(), polys[j].begin(), polys[j].end());
                Polygon h = convex_hull(all);
                if (area(h) == area(polys[i]) + area(polys[j])) {
                    polys[i] = h;
                    polys.erase(polys.begin() + static_cast<std::ptrdiff_t>(j));
                    merged = true;
                }
            }
    }
    return polys;
}

}  // namespace detail

/// Checks the planar-holes preconditions: K convex with positive area, bites
/// convex with positive area, pairwise disjoint, each meeting the boundary of K
/// in at most one arc.
inline void validate_holes(const PlanarHolesSpec& s) {
    Polygon k = to_polygon(s.outer);
    if (k.size() < 3) throw InvalidArgument("outer polygon has zero area");
    std::vector<Polygon> bites;
    for (std::size_t i = 0; i < s.bites.size(); ++i) {
        Polygon b = to_polygon(s.bites[i]);
        if (b.size() < 3) throw InvalidArgument("bite " + std::to_string(i) + " has zero area");
        if (area(intersect(b, k)) == 0) throw InvalidArgument("bite " + std::to_string(i) + " misses the outer polygon");
        if (detail::boundary_arcs(k, b) > 1)
            throw InvalidArgument("bite " + std::to_string(i) + " meets the outer boundary in more than one arc");
        for (std::size_t j = 0; j < bites.size(); ++j)
            if (area(intersect(b, bites[j])) > 0)
                throw InvalidArgument("bites " + std::to_string(j) + " and " + std::to_string(i) + " overlap");
        bites.push_back(std::move(b));
    }
}

/// True when the bite meets the boundary of K (otherwise it is an interior hole).
inline bool bite_touches_boundary(const PlanarHolesSpec& s, std::size_t i) {
    return detail::boundary_arcs(to_polygon(s.outer), to_polygon(s.bites[i])) > 0;
}

/// Convex pieces with disjoint interiors whose union is K minus the open bites
/// (up to measure zero), by vertical slabs between all vertex and crossing abscissae.
inline std::vector<Polygon> decompose_holes(const PlanarHolesSpec& s) {
    validate_holes(s);
    Polygon k = to_polygon(s.outer);
    std::vector<Polygon> bites;
    for (const auto& b : s.bites) bites.push_back(to_polygon(b));
    std::vector<Rational> xs;
    std::vector<const Polygon*> all{&k};
    for (const auto& b : bites) all.push_back(&b);
    for (const auto* p : all)
        for (const auto& v : *p) xs.push_back(v.x);
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b)
            for (std::size_t i = 0; i < all[a]->size(); ++i)
                for (std::size_t j = 0; j < all[b]->size(); ++j)
                    detail::segment_crossings((*all[a])[i], (*all[a])[(i + 1) % all[a]->size()], (*all[b])[j],
                                              (*all[b])[(j + 1) % all[b]->size()], xs);
    Rational kmin = k.front().x, kmax = k.front().x;
    for (const auto& v : k) {
        kmin = std::min(kmin, v.x);
        kmax = std::max(kmax, v.x);
    }
    std::erase_if(xs, [&](const Rational& x) { return x < kmin || x > kmax; });
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<Polygon> pieces;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const Rational &xa = xs[i], &xb = xs[i + 1];
        Polygon ks = detail::clip_slab(k, xa, xb);
        Rational kla, kua, klb, kub;
        if (!detail::cross_section(ks, xa, kla, kua) || !detail::cross_section(ks, xb, klb, kub)) continue;
        struct Band {
            Rational la, ua, lb, ub;
        };
        std::vector<Band> cut;
        for (const auto& b : bites) {
            Polygon bs = detail::clip_slab(b, xa, xb);
            if (bs.size() < 3) continue;
            bs = intersect(bs, ks);
            if (bs.size() < 3 || area(bs) == 0) continue;
            Band band;
            if (!detail::cross_section(bs, xa, band.la, band.ua) || !detail::cross_section(bs, xb, band.lb, band.ub))
                continue;
            cut.push_back(band);
        }
        std::sort(cut.begin(), cut.end(), [](const Band& a, const Band& b) { return a.la + a.lb < b.la + b.lb; });
        Rational ca = kla, cb = klb;
        auto emit = [&](const Rational& ta, const Rational& tb) {
            Polygon q = convex_hull({Vec2{xa, ca}, Vec2{xb, cb}, Vec2{xb, tb}, Vec2{xa, ta}});
            if (q.size() >= 3 && area(q) > 0) pieces.push_back(std::move(q));
        };
        for (const auto& c : cut) {
            emit(c.la, c.lb);
            ca = c.ua;
            cb = c.ub;
        }
        emit(kua, kub);
    }
    return detail::merge_convex(std::move(pieces));
}

/// Convex pieces whose union is the set.
inline std::vector<ConvexPiece> to_pieces(const SetSpec& spec) {
    const std::size_t d = spec.dim;
    if (d == 0) throw InvalidArgument("set dimension must be positive");
    auto check = [&](const Point& p, const std::string& what) {
        if (p.size() != d)
            throw InvalidArgument(what + " has dimension " + std::to_string(p.size()) + ", expected " + std::to_string(d));
    };
    std::vector<ConvexPiece> out;
    if (const auto* s = std::get_if<SpiderSpec>(&spec.body)) {
        check(s->apex, "apex");
        for (std::size_t i = 0; i < s->tips.size(); ++i) check(s->tips[i], "tip " + std::to_string(i));
        Spider sp = to_spider(*s);
        sp.validate();
        for (const auto& t : sp.tips) out.push_back(ConvexPiece(Zonotope(sp.apex, {t - sp.apex})));
    } else if (const auto* h = std::get_if<HullSpec>(&spec.body)) {
        if (h->points.empty()) throw InvalidArgument("hull needs at least one point");
        for (std::size_t i = 0; i < h->points.size(); ++i) check(h->points[i], "point " + std::to_string(i));
        out.push_back(ConvexPiece::from_points(d, h->points));
    } else if (const auto* b = std::get_if<BoxUnionSpec>(&spec.body)) {
        if (b->boxes.empty()) throw InvalidArgument("box union needs at least one box");
        for (std::size_t i = 0; i < b->boxes.size(); ++i) {
            check(b->boxes[i].lo, "box " + std::to_string(i));
            check(b->boxes[i].hi, "box " + std::to_string(i));
            out.push_back(ConvexPiece::box(b->boxes[i].lo, b->boxes[i].hi));
        }
    } else if (const auto* ph = std::get_if<PlanarHolesSpec>(&spec.body)) {
        if (d != 2) throw InvalidArgument("planar-holes sets must have dimension 2");
        for (const auto& p : decompose_holes(*ph)) out.push_back(ConvexPiece::from_polygon(p));
    } else {
        const auto& a = std::get<AffineSpec>(spec.body);
        if (!a.inner) throw InvalidArgument("affine set without inner set");
        if (a.matrix.size() != d) throw InvalidArgument("affine matrix must have " + std::to_string(d) + " rows");
        for (const auto& row : a.matrix)
            if (row.size() != a.inner->dim) throw InvalidArgument("affine matrix row length differs from inner dimension");
        check(a.translation, "translation");
        for (const auto& p : to_pieces(*a.inner)) out.push_back(p.mapped(a.matrix, a.translation));
    }
    return out;
}

/// Affine dimension of the union of the pieces.
inline std::size_t affine_dimension(const std::vector<ConvexPiece>& pieces) {
    std::vector<Point> verts;
    for (const auto& p : pieces)
        for (auto& v : p.vertices()) verts.push_back(std::move(v));
    std::vector<Point> diffs;
    for (const auto& v : verts) diffs.push_back(v - verts.front());
    return rank_of(std::move(diffs));
}

/// The convex hull of the union of the pieces, as a single piece.
inline ConvexPiece hull_piece(const std::vector<ConvexPiece>& pieces) {
    std::vector<Point> verts;
    for (const auto& p : pieces)
        for (auto& v : p.vertices()) verts.push_back(std::move(v));
    if (pieces.front().dim() == 3) {
        // keep only points extreme in some direction of a coarse set to limit normal growth
        std::sort(verts.begin(), verts.end(),
                  [](const Point& a, const Point& b) { return detail::point_key(a) < detail::point_key(b); });
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    }
    return ConvexPiece::from_points(pieces.front().dim(), std::move(verts));
}

/// Rejects specs whose volume semantics are undefined (singular affine maps).
inline void require_volume_semantics(const SetSpec& spec) {
    if (const auto* a = std::get_if<AffineSpec>(&spec.body)) {
        if (affine_determinant(*a) == 0) throw InvalidArgument("affine map is singular; volumes are undefined");
        require_volume_semantics(*a->inner);
    }
}

}  // namespace mksum
