#pragma once

// Audits for convex plane sets with convex bites removed: the area sequence of
// (1/k) X[k], and for each bite meeting the boundary the convex-curve inequality
//   area(M / k) <= area((M + gamma) / (k + 1)),  M = X[k] cap k D,
// where D = K cap closure(bite) and gamma is the part of the bite boundary inside K.

#include <set>
#include <string>
#include <vector>

#include "mksum/audit.hpp"

namespace mksum {

struct CurveStepEntry {
    std::size_t bite = 0;
    std::int64_t k = 0;
    VolumeBound m;       // area(M / k)
    VolumeBound m_plus;  // area((M + gamma) / (k + 1))
    Verdict verdict = Verdict::inconclusive;
    /// Spacing of the deciding grid, or 0 when both areas were computed exactly.
    Rational h;
    double seconds = 0;
};

/// Polygon counts up to which curve steps use exact union areas.
inline constexpr std::size_t kExactUnionLimit = 400;

struct HolesReport {
    AuditReport audit;
    std::vector<CurveStepEntry> curve_steps;
};

namespace detail {

inline bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    if (cross(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

inline bool on_boundary(const Polygon& k, const Vec2& p) {
    for (std::size_t i = 0; i < k.size(); ++i)
        if (on_segment(k[i], k[(i + 1) % k.size()], p)) return true;
    return false;
}

inline std::vector<Polygon> dedupe(std::vector<Polygon> ps) {
    std::set<std::string> seen;
    std::vector<Polygon> out;
    for (auto& p : ps) {
        std::string key;
        for (const auto& v : p) key += to_string(v.x) + "," + to_string(v.y) + ";";
        if (seen.insert(key).second) out.push_back(std::move(p));
    }
    return out;
}

inline std::vector<ConvexPiece> as_pieces(const std::vector<Polygon>& ps, const Rational& s) {
    std::vector<ConvexPiece> out;
    for (const auto& p : ps) out.push_back(ConvexPiece::from_polygon(scaled(p, s)));
    return out;
}

}  // namespace detail

/// Segments of the bite boundary lying in K (not on the boundary of K).
inline std::vector<Polygon> inner_curve(const Polygon& k, const Polygon& d) {
    std::vector<Polygon> segs;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Vec2 &a = d[i], &b = d[(i + 1) % d.size()];
        Vec2 mid = Rational(1, 2) * (a + b);
        if (!detail::on_boundary(k, mid)) segs.push_back(Polygon{a, b});
    }
    return segs;
}

/// Unscaled k-fold sum pieces of a list of convex polygons.
inline std::vector<Polygon> kfold_polygons(const std::vector<Polygon>& pieces, std::int64_t k) {
    std::vector<Polygon> out;
    for (const auto& c : compositions(k, static_cast<std::int64_t>(pieces.size()))) {
        Polygon acc{Vec2{0, 0}};
        for (std::size_t i = 0; i < pieces.size(); ++i)
            if (c.parts[i] > 0) acc = minkowski_sum(acc, scaled(pieces[i], Rational(c.parts[i])));
        out.push_back(std::move(acc));
    }
    return detail::dedupe(std::move(out));
}

/// Convex-curve inequality for one boundary bite and one k, refined over the schedule.
inline CurveStepEntry curve_step(const std::vector<Polygon>& x_pieces, const Polygon& k_poly, const Polygon& bite,
                                 std::size_t bite_index, std::int64_t k, const std::vector<Rational>& schedule,
                                 const BoundsOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    CurveStepEntry e;
    e.bite = bite_index;
    e.k = k;
    Polygon d = intersect(k_poly, bite);
    Polygon kd = scaled(d, Rational(k));
    std::vector<Polygon> m;
    for (const auto& q : kfold_polygons(x_pieces, k)) {
        Polygon c = intersect(q, kd);
        if (c.size() >= 3 && area(c) > 0) m.push_back(std::move(c));
    }
    std::vector<Polygon> mg;
    for (const auto& q : m)
        for (const auto& s : inner_curve(k_poly, d)) mg.push_back(minkowski_sum(q, s));
    mg = detail::dedupe(std::move(mg));
    if (m.size() + mg.size() <= kExactUnionLimit) {
        Rational a = union_area(m) / Rational(k * k);
        Rational b = union_area(mg) / Rational((k + 1) * (k + 1));
        e.m = {a, a};
        e.m_plus = {b, b};
        e.h = 0;
        e.verdict = compare_bounds(e.m, e.m_plus);
        e.seconds = detail::elapsed(t0);
        return e;
    }
    auto mk = detail::as_pieces(m, Rational(1, k));
    auto mgk = detail::as_pieces(mg, Rational(1, k + 1));
    Point lo{d.front().x, d.front().y}, hi = lo;
    for (const auto& v : d) {
        lo[0] = std::min(lo[0], v.x);
        lo[1] = std::min(lo[1], v.y);
        hi[0] = std::max(hi[0], v.x);
        hi[1] = std::max(hi[1], v.y);
    }
    for (const auto& h : schedule) {
        GridFrame frame = GridFrame::covering(lo, hi, h);
        e.m = union_bounds(mk, frame, opt).bound;
        e.m_plus = union_bounds(mgk, frame, opt).bound;
        e.h = h;
        e.verdict = compare_bounds(e.m, e.m_plus);
        if (e.verdict != Verdict::inconclusive) break;
    }
    e.seconds = detail::elapsed(t0);
    return e;
}

/// Area audit of X = K minus the bites, plus the convex-curve inequality for
/// every bite meeting the boundary of K and every k in [2, kmax - 1].
inline HolesReport holes_audit(const PlanarHolesSpec& spec, const AuditOptions& opt) {
    validate_holes(spec);
    auto x_pieces = decompose_holes(spec);
    std::vector<ConvexPiece> pieces;
    for (const auto& p : x_pieces) pieces.push_back(ConvexPiece::from_polygon(p));
    HolesReport rep;
    AuditOptions o = opt;
    if (o.h0 == 0) o.h0 = default_spacing(2);
    rep.audit = audit_pieces(pieces, o);
    Polygon k_poly = to_polygon(spec.outer);
    for (std::size_t b = 0; b < spec.bites.size(); ++b) {
        if (!bite_touches_boundary(spec, b)) continue;
        Polygon bite = to_polygon(spec.bites[b]);
        for (std::int64_t k = 2; k < opt.kmax; ++k)
            rep.curve_steps.push_back(curve_step(x_pieces, k_poly, bite, b, k, rep.audit.schedule, o.bounds));
    }
    return rep;
}

}  // namespace mksum
