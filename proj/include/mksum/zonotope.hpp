#pragma once

// Spiders (finite unions of segments from a common apex), compositions of k
// over their tips, and the zonotopes sum_i t_i [apex, tip_i] whose union is the
// k-fold Minkowski sum.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mksum/combinatorics.hpp"
#include "mksum/errors.hpp"
#include "mksum/rational.hpp"

namespace mksum {

/// Union of the segments [apex, tip_i]; star-shaped with respect to the apex.
struct Spider {
    Point apex;
    std::vector<Point> tips;

    std::size_t dim() const { return apex.size(); }

    void validate() const {
        if (apex.empty()) throw InvalidArgument("spider apex has dimension 0");
        if (tips.empty()) throw InvalidArgument("spider needs at least one tip");
        for (std::size_t i = 0; i < tips.size(); ++i) {
            if (tips[i].size() != apex.size())
                throw InvalidArgument("spider tip " + std::to_string(i) + " has dimension " +
                                      std::to_string(tips[i].size()) + ", expected " +
                                      std::to_string(apex.size()));
            if (tips[i] == apex)
                throw InvalidArgument("spider tip " + std::to_string(i) + " coincides with the apex");
        }
    }

    /// Segments from the origin to the standard basis vectors.
    static Spider axis(std::size_t d) {
        Spider s{zero_point(d), {}};
        for (std::size_t i = 0; i < d; ++i) {
            Point e = zero_point(d);
            e[i] = 1;
            s.tips.push_back(std::move(e));
        }
        return s;
    }

    Rational diameter_linf() const {
        Rational best = 0;
        std::vector<Point> pts = tips;
        pts.push_back(apex);
        for (const auto& a : pts)
            for (const auto& b : pts)
                for (std::size_t j = 0; j < dim(); ++j) best = std::max(best, abs_of(a[j] - b[j]));
        return best;
    }
};

/// Multiplicities t_1..t_m with sum k.
struct Composition {
    std::vector<std::int64_t> parts;

    std::int64_t total() const {
        std::int64_t s = 0;
        for (auto p : parts) s += p;
        return s;
    }
    auto operator<=>(const Composition&) const = default;
};

inline std::vector<Composition> compositions(std::int64_t k, std::int64_t m) {
    if (k < 0) throw InvalidArgument("compositions: negative k");
    if (m < 1) throw InvalidArgument("compositions: m must be >= 1");
    std::vector<Composition> out;
    for (auto& idx : enumerate_layer(m, k)) out.push_back(Composition{std::move(idx.coords)});
    return out;
}

struct SupportResult {
    Rational value;
    Point witness;
};

/// {base + sum_i lambda_i g_i : lambda_i in [0,1]}.
class Zonotope {
public:
    Zonotope() = default;
    Zonotope(Point base, std::vector<Point> generators)
        : base_(std::move(base)), generators_(std::move(generators)) {
        for (const auto& g : generators_)
            if (g.size() != base_.size()) throw InvalidArgument("zonotope generator dimension mismatch");
        std::erase_if(generators_, [](const Point& g) { return is_zero(g); });
    }

    std::size_t dim() const { return base_.size(); }
    const Point& base() const { return base_; }
    const std::vector<Point>& generators() const { return generators_; }

    /// max <x,u> over the zonotope, with a maximizing vertex.
    SupportResult support_point(const Point& u) const {
        if (u.size() != dim()) throw InvalidArgument("support direction dimension mismatch");
        if (is_zero(u)) throw InvalidArgument("support direction must be nonzero");
        SupportResult r{dot(base_, u), base_};
        for (const auto& g : generators_) {
            Rational gu = dot(g, u);
            if (gu > 0) {
                r.value += gu;
                r.witness = r.witness + g;
            }
        }
        return r;
    }

    /// Support value only; accepts the zero direction.
    Rational support_value(const Point& u) const {
        Rational v = dot(base_, u);
        for (const auto& g : generators_) {
            Rational gu = dot(g, u);
            if (gu > 0) v += gu;
        }
        return v;
    }

    /// Double-precision support oracle for the distance routines.
    std::vector<double> support_witness(const std::vector<double>& u) const {
        std::vector<double> w = to_doubles(base_);
        for (const auto& g : generators_) {
            double gu = 0;
            for (std::size_t j = 0; j < dim(); ++j) gu += to_double(g[j]) * u[j];
            if (gu > 0)
                for (std::size_t j = 0; j < dim(); ++j) w[j] += to_double(g[j]);
        }
        return w;
    }

    Point center() const {
        Point c = base_;
        for (const auto& g : generators_) c = c + Rational(1, 2) * g;
        return c;
    }

    void bounding_box(Point& lo, Point& hi) const {
        lo = base_;
        hi = base_;
        for (const auto& g : generators_)
            for (std::size_t j = 0; j < dim(); ++j) {
                if (g[j] < 0)
                    lo[j] += g[j];
                else
                    hi[j] += g[j];
            }
    }

    Zonotope scaled(const Rational& s) const {
        std::vector<Point> gens;
        for (const auto& g : generators_) gens.push_back(s * g);
        return Zonotope(s * base_, std::move(gens));
    }

    Zonotope translated(const Point& t) const { return Zonotope(base_ + t, generators_); }

    /// Minkowski sum; parallel generators are left separate.
    Zonotope operator+(const Zonotope& other) const {
        std::vector<Point> gens = generators_;
        gens.insert(gens.end(), other.generators_.begin(), other.generators_.end());
        return Zonotope(base_ + other.base_, std::move(gens));
    }

private:
    Point base_;
    std::vector<Point> generators_;
};

/// sum_i t_i [apex, tip_i]: base k*apex, generators t_i (tip_i - apex).
inline Zonotope zonotope_from_composition(const Spider& s, const Composition& c) {
    if (c.parts.size() != s.tips.size())
        throw InvalidArgument("composition has " + std::to_string(c.parts.size()) + " parts, spider has " +
                              std::to_string(s.tips.size()) + " tips");
    std::vector<Point> gens;
    for (std::size_t i = 0; i < s.tips.size(); ++i)
        if (c.parts[i] > 0) gens.push_back(Rational(c.parts[i]) * (s.tips[i] - s.apex));
    return Zonotope(Rational(c.total()) * s.apex, std::move(gens));
}

/// Rank of a list of vectors (exact Gaussian elimination).
inline std::size_t rank_of(std::vector<Point> rows) {
    if (rows.empty()) return 0;
    std::size_t d = rows.front().size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            Rational f = rows[r][col] / rows[rank][col];
            for (std::size_t j = col; j < d; ++j) rows[r][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace mksum
