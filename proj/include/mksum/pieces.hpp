#pragma once

// Convex pieces: the building blocks of every set whose k-fold sums are
// evaluated. A set given as a finite union of convex pieces P_1..P_n has
// A[k] = union over compositions t of sum_i t_i P_i, since P + P = 2P for
// convex P.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mksum/combinatorics.hpp"
#include "mksum/polygon.hpp"
#include "mksum/zonotope.hpp"

namespace mksum {

/// Convex hull of finitely many points. In the plane the points are kept as
/// the counter-clockwise hull.
struct PointHull {
    std::size_t dim = 0;
    std::vector<Point> points;
};

using IntVector = std::vector<BigInt>;

namespace detail {

inline Rational determinant(std::vector<Point> m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            Rational f = m[r][col] / m[col][col];
            for (std::size_t j = col; j < n; ++j) m[r][j] -= f * m[col][j];
        }
    }
    return det;
}

/// Vector orthogonal to d-1 vectors in R^d (cofactor expansion); zero when dependent.
inline Point orthogonal_complement(const std::vector<Point>& vs, std::size_t d) {
    Point n(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<Point> minor;
        for (const auto& v : vs) {
            Point row;
            for (std::size_t c = 0; c < d; ++c)
                if (c != j) row.push_back(v[c]);
            minor.push_back(std::move(row));
        }
        Rational det = minor.empty() ? Rational(1) : determinant(minor);
        n[j] = (j % 2 == 0) ? det : Rational(-det);
    }
    return n;
}

inline IntVector canonical_sign(IntVector v) {
    for (const auto& x : v) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : v) y = -y;
        break;
    }
    return v;
}

inline Point to_point(const IntVector& v) {
    Point p;
    for (const auto& x : v) p.emplace_back(x);
    return p;
}

inline std::string point_key(const Point& p) {
    std::string s;
    for (const auto& x : p) s += to_string(x) + ",";
    return s;
}

}  // namespace detail

/// Normals (up to sign, primitive integer) of all hyperplanes spanned by d-1 of
/// the given directions together with the coordinate axes. For a zonotope or
/// polytope whose edge directions are listed, these include every facet normal
/// of P and of P + [-r, r]^d.
inline std::vector<IntVector> spanned_normals(const std::vector<Point>& directions, std::size_t d) {
    std::vector<Point> dirs = directions;
    for (std::size_t j = 0; j < d; ++j) {
        Point e = zero_point(d);
        e[j] = 1;
        dirs.push_back(std::move(e));
    }
    std::set<IntVector> seen;
    std::vector<IntVector> out;
    if (d == 1) return {IntVector{BigInt(1)}};
    const std::size_t r = d - 1;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    if (dirs.size() < r) return out;
    while (true) {
        std::vector<Point> sub;
        for (auto i : idx) sub.push_back(dirs[i]);
        Point n = detail::orthogonal_complement(sub, d);
        if (!is_zero(n)) {
            IntVector iv = detail::canonical_sign(primitive_integer_direction(n));
            if (seen.insert(iv).second) out.push_back(iv);
        }
        // next combination
        std::size_t pos = r;
        while (pos > 0 && idx[pos - 1] == dirs.size() - r + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < r; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

class ConvexPiece {
public:
    ConvexPiece() = default;
    explicit ConvexPiece(Zonotope z) : shape_(std::move(z)) { finish(); }
    explicit ConvexPiece(PointHull h) : shape_(std::move(h)) { normalize_hull(); finish(); }

    static ConvexPiece from_points(std::size_t d, std::vector<Point> pts) {
        if (pts.empty()) throw InvalidArgument("convex piece needs at least one point");
        for (const auto& p : pts)
            if (p.size() != d) throw InvalidArgument("convex piece point dimension mismatch");
        return ConvexPiece(PointHull{d, std::move(pts)});
    }

    static ConvexPiece from_polygon(const Polygon& poly) {
        std::vector<Point> pts;
        for (const auto& v : poly) pts.push_back(Point{v.x, v.y});
        return from_points(2, std::move(pts));
    }

    static ConvexPiece box(const Point& lo, const Point& hi) {
        std::vector<Point> gens;
        for (std::size_t j = 0; j < lo.size(); ++j) {
            if (hi[j] < lo[j]) throw InvalidArgument("box with lo > hi");
            Point g = zero_point(lo.size());
            g[j] = hi[j] - lo[j];
            gens.push_back(std::move(g));
        }
        return ConvexPiece(Zonotope(lo, std::move(gens)));
    }

    std::size_t dim() const { return dim_; }
    bool full_dimensional() const { return full_dim_; }
    bool is_zonotope() const { return std::holds_alternative<Zonotope>(shape_); }
    const Zonotope& zonotope() const { return std::get<Zonotope>(shape_); }
    const PointHull& hull() const { return std::get<PointHull>(shape_); }
    const Point& bbox_lo() const { return lo_; }
    const Point& bbox_hi() const { return hi_; }

    /// Normals (one per sign pair) from spanned_normals over the piece's edge directions.
    const std::vector<IntVector>& normals() const { return normals_; }

    Rational support(const Point& u) const {
        if (const auto* z = std::get_if<Zonotope>(&shape_)) return z->support_value(u);
        const auto& h = std::get<PointHull>(shape_);
        Rational best = dot(h.points.front(), u);
        for (const auto& p : h.points) best = std::max(best, dot(p, u));
        return best;
    }

    std::vector<double> support_witness(const std::vector<double>& u) const {
        if (const auto* z = std::get_if<Zonotope>(&shape_)) return z->support_witness(u);
        const auto& h = std::get<PointHull>(shape_);
        std::size_t best = 0;
        double best_v = -1e300;
        for (std::size_t i = 0; i < h.points.size(); ++i) {
            double v = 0;
            for (std::size_t j = 0; j < dim_; ++j) v += to_double(h.points[i][j]) * u[j];
            if (v > best_v) {
                best_v = v;
                best = i;
            }
        }
        return to_doubles(h.points[best]);
    }

    /// Vertices (2D only) as an exact polygon.
    Polygon polygon() const {
        if (dim_ != 2) throw InvalidArgument("polygon() requires a planar piece");
        std::vector<Vec2> pts;
        if (const auto* z = std::get_if<Zonotope>(&shape_)) {
            const auto& gens = z->generators();
            if (gens.size() > 20) throw InvalidArgument("zonotope has too many generators for vertex expansion");
            std::vector<Vec2> cur{Vec2{z->base()[0], z->base()[1]}};
            for (const auto& g : gens) {
                std::vector<Vec2> next = cur;
                for (const auto& c : cur) next.push_back(c + Vec2{g[0], g[1]});
                cur = convex_hull(std::move(next));
            }
            return cur;
        }
        for (const auto& p : std::get<PointHull>(shape_).points) pts.push_back(Vec2{p[0], p[1]});
        return convex_hull(std::move(pts));
    }

    /// Vertices (possibly with non-extreme points for zonotopes of many generators).
    std::vector<Point> vertices() const {
        if (const auto* z = std::get_if<Zonotope>(&shape_)) {
            if (z->generators().size() > 16) throw InvalidArgument("zonotope has too many generators for vertex expansion");
            if (dim_ == 2) {
                std::vector<Point> out;
                for (const auto& v : polygon()) out.push_back(Point{v.x, v.y});
                return out;
            }
            std::vector<Point> cur{z->base()};
            for (const auto& g : z->generators()) {
                std::size_t n = cur.size();
                for (std::size_t i = 0; i < n; ++i) cur.push_back(cur[i] + g);
            }
            std::sort(cur.begin(), cur.end(),
                      [](const Point& a, const Point& b) { return detail::point_key(a) < detail::point_key(b); });
            cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
            return cur;
        }
        return std::get<PointHull>(shape_).points;
    }

    ConvexPiece scaled(const Rational& s) const {
        if (const auto* z = std::get_if<Zonotope>(&shape_)) return ConvexPiece(z->scaled(s));
        PointHull h = std::get<PointHull>(shape_);
        for (auto& p : h.points) p = s * p;
        return ConvexPiece(std::move(h));
    }

    ConvexPiece translated(const Point& t) const {
        if (const auto* z = std::get_if<Zonotope>(&shape_)) return ConvexPiece(z->translated(t));
        PointHull h = std::get<PointHull>(shape_);
        for (auto& p : h.points) p = p + t;
        return ConvexPiece(std::move(h));
    }

    /// x -> M x + t
    ConvexPiece mapped(const std::vector<Point>& matrix, const Point& t) const {
        auto apply = [&](const Point& p, bool affine) {
            Point out(matrix.size());
            for (std::size_t i = 0; i < matrix.size(); ++i) out[i] = dot(matrix[i], p) + (affine ? t[i] : Rational(0));
            return out;
        };
        if (const auto* z = std::get_if<Zonotope>(&shape_)) {
            std::vector<Point> gens;
            for (const auto& g : z->generators()) gens.push_back(apply(g, false));
            return ConvexPiece(Zonotope(apply(z->base(), true), std::move(gens)));
        }
        PointHull h = std::get<PointHull>(shape_);
        for (auto& p : h.points) p = apply(p, true);
        h.dim = matrix.size();
        return ConvexPiece(std::move(h));
    }

    /// Minkowski sum. Zonotope + zonotope stays a zonotope; planar pieces fall back
    /// to hull-of-sums; otherwise one summand must be a single point.
    ConvexPiece operator+(const ConvexPiece& o) const {
        if (is_zonotope() && o.is_zonotope()) return ConvexPiece(zonotope() + o.zonotope());
        if (auto p = single_point()) return o.translated(*p);
        if (auto p = o.single_point()) return translated(*p);
        if (dim_ == 2) return from_polygon(minkowski_sum(polygon(), o.polygon()));
        throw InvalidArgument("Minkowski sum of general polytopes is only supported in the plane");
    }

    /// Exact identity key (equal keys imply equal sets).
    std::string key() const {
        std::string k;
        if (const auto* z = std::get_if<Zonotope>(&shape_)) {
            k = "Z:" + detail::point_key(z->base()) + "|";
            std::vector<std::string> gs;
            for (const auto& g : z->generators()) gs.push_back(detail::point_key(g));
            std::sort(gs.begin(), gs.end());
            for (const auto& g : gs) k += g + ";";
            return k;
        }
        k = "H:";
        std::vector<std::string> ps;
        for (const auto& p : std::get<PointHull>(shape_).points) ps.push_back(detail::point_key(p));
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        for (const auto& p : ps) k += p + ";";
        return k;
    }

private:
    std::optional<Point> single_point() const {
        if (const auto* z = std::get_if<Zonotope>(&shape_)) {
            if (z->generators().empty()) return z->base();
            return std::nullopt;
        }
        const auto& h = std::get<PointHull>(shape_);
        for (const auto& p : h.points)
            if (p != h.points.front()) return std::nullopt;
        return h.points.front();
    }

    void normalize_hull() {
        auto& h = std::get<PointHull>(shape_);
        if (h.dim == 2) {
            std::vector<Vec2> pts;
            for (const auto& p : h.points) pts.push_back(Vec2{p[0], p[1]});
            auto hull = convex_hull(std::move(pts));
            h.points.clear();
            for (const auto& v : hull) h.points.push_back(Point{v.x, v.y});
        } else {
            std::sort(h.points.begin(), h.points.end(),
                      [](const Point& a, const Point& b) { return detail::point_key(a) < detail::point_key(b); });
            h.points.erase(std::unique(h.points.begin(), h.points.end()), h.points.end());
        }
    }

    void finish() {
        std::vector<Point> directions;
        if (const auto* z = std::get_if<Zonotope>(&shape_)) {
            dim_ = z->dim();
            z->bounding_box(lo_, hi_);
            directions = z->generators();
        } else {
            const auto& h = std::get<PointHull>(shape_);
            dim_ = h.dim;
            lo_ = h.points.front();
            hi_ = h.points.front();
            for (const auto& p : h.points)
                for (std::size_t j = 0; j < dim_; ++j) {
                    lo_[j] = std::min(lo_[j], p[j]);
                    hi_[j] = std::max(hi_[j], p[j]);
                }
            if (dim_ == 2 && h.points.size() >= 2) {
                for (std::size_t i = 0; i < h.points.size(); ++i) {
                    const auto& a = h.points[i];
                    const auto& b = h.points[(i + 1) % h.points.size()];
                    if (h.points.size() == 2 && i == 1) break;
                    directions.push_back(b - a);
                }
            } else {
                for (std::size_t i = 0; i < h.points.size(); ++i)
                    for (std::size_t j = i + 1; j < h.points.size(); ++j)
                        directions.push_back(h.points[j] - h.points[i]);
            }
        }
        full_dim_ = rank_of(directions) == dim_;
        normals_ = spanned_normals(directions, dim_);
    }

    std::variant<Zonotope, PointHull> shape_;
    std::size_t dim_ = 0;
    bool full_dim_ = false;
    Point lo_, hi_;
    std::vector<IntVector> normals_;
};

/// All scaled k-fold sum pieces (1/k) sum_i t_i P_i, one per composition,
/// deduplicated by exact key.
inline std::vector<ConvexPiece> kfold_scaled_pieces(const std::vector<ConvexPiece>& pieces, std::int64_t k) {
    if (k < 1) throw InvalidArgument("k-fold sum requires k >= 1");
    if (pieces.empty()) throw InvalidArgument("k-fold sum of an empty piece list");
    std::vector<ConvexPiece> out;
    std::set<std::string> seen;
    for (const auto& c : compositions(k, static_cast<std::int64_t>(pieces.size()))) {
        std::optional<ConvexPiece> acc;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (c.parts[i] == 0) continue;
            ConvexPiece term = pieces[i].scaled(Rational(c.parts[i], k));
            acc = acc ? (*acc + term) : term;
        }
        if (seen.insert(acc->key()).second) out.push_back(std::move(*acc));
    }
    return out;
}

}  // namespace mksum
