#pragma once

// Monotonicity audits of vol((1/k) A[k]) and Hausdorff convergence to conv A.

#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mksum/edt.hpp"
#include "mksum/set_spec.hpp"
#include "mksum/volume.hpp"

namespace mksum {

enum class Verdict { nondecreasing, violation, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::nondecreasing: return "certified-nondecreasing";
        case Verdict::violation: return "certified-violation";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

/// Verdict of vol(next) against vol(prev) from bounds alone.
inline Verdict compare_bounds(const VolumeBound& prev, const VolumeBound& next) {
    if (next.lower >= prev.upper) return Verdict::nondecreasing;
    if (next.upper < prev.lower) return Verdict::violation;
    return Verdict::inconclusive;
}

struct AuditOptions {
    std::int64_t kmax = 4;
    /// Coarsest spacing; 0 picks 1/64 in the plane and 1/16 otherwise.
    Rational h0 = 0;
    int refine = 4;
    BoundsOptions bounds;
    bool hausdorff = true;
    /// Audit spiders in coordinates where d of the legs are the unit vectors.
    bool normalize = true;
};

/// x -> matrix (x - origin); volumes in the original coordinates are
/// volume_factor times the volumes after the map.
struct Normalization {
    std::vector<Point> matrix;
    Point origin;
    Rational volume_factor = 1;
};

inline Rational default_spacing(std::size_t d) { return d <= 2 ? Rational(1, 64) : Rational(1, 16); }

struct AuditEntry {
    std::int64_t k = 0;
    VolumeBound bound;
    Rational h;
    /// Comparison with entry k - 1; empty for the first entry.
    std::optional<Verdict> verdict;
    /// d_H((1/k) A[k], conv A) on the coarsest grid, or negative when not measured.
    double hausdorff = -1;
    double seconds = 0;
    std::string error;
};

struct AuditReport {
    std::vector<AuditEntry> entries;
    std::vector<Rational> schedule;
    bool dim_deficient = false;
    bool hull_reached = false;
    double hausdorff_slack = 0;
    /// Volume factor of the coordinate normalization (1 when none was applied).
    Rational volume_factor = 1;

    std::size_t count(Verdict v) const {
        std::size_t n = 0;
        for (const auto& e : entries)
            if (e.verdict && *e.verdict == v) ++n;
        return n;
    }
    /// True when every step ended without a result because of resource limits.
    bool infeasible() const {
        if (entries.size() < 2) return false;
        for (std::size_t i = 1; i < entries.size(); ++i)
            if (entries[i].error.empty()) return false;
        return true;
    }
};

namespace detail {

inline std::set<std::string> piece_keys(const std::vector<ConvexPiece>& pieces) {
    std::set<std::string> s;
    for (const auto& p : pieces) s.insert(p.key());
    return s;
}

class BoundCache {
public:
    BoundCache(const std::vector<ConvexPiece>& pieces, std::vector<Rational> schedule, const BoundsOptions& opt)
        : pieces_(pieces), schedule_(std::move(schedule)), opt_(opt) {
        pieces_bbox(pieces_, lo_, hi_);
    }

    GridFrame frame(int level) const { return GridFrame::covering(lo_, hi_, schedule_[level]); }

    const std::vector<ConvexPiece>& scaled(std::int64_t k) {
        auto it = scaled_.find(k);
        if (it == scaled_.end()) it = scaled_.emplace(k, kfold_scaled_pieces(pieces_, k)).first;
        return it->second;
    }

    const VolumeBound& bound(std::int64_t k, int level) {
        auto key = std::make_pair(k, level);
        auto it = bounds_.find(key);
        if (it == bounds_.end()) it = bounds_.emplace(key, union_bounds(scaled(k), frame(level), opt_).bound).first;
        return it->second;
    }

    const VolumeBound& hull_bound(const ConvexPiece& hull, int level) {
        auto it = hull_.find(level);
        if (it == hull_.end()) it = hull_.emplace(level, union_bounds({hull}, frame(level), opt_).bound).first;
        return it->second;
    }

private:
    const std::vector<ConvexPiece>& pieces_;
    std::vector<Rational> schedule_;
    BoundsOptions opt_;
    Point lo_, hi_;
    std::map<std::int64_t, std::vector<ConvexPiece>> scaled_;
    std::map<std::pair<std::int64_t, int>, VolumeBound> bounds_;
    std::map<int, VolumeBound> hull_;
};

inline std::optional<std::vector<Point>> inverse(std::vector<Point> m) {
    const std::size_t n = m.size();
    std::vector<Point> inv(n, zero_point(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        Rational f = m[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            m[c][j] /= f;
            inv[c][j] /= f;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rational g = m[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= g * m[c][j];
                inv[r][j] -= g * inv[c][j];
            }
        }
    }
    return inv;
}

inline double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Linear map sending the d legs of largest |det| to the unit vectors, so the
/// remaining legs have coordinates in [-1, 1]. Empty for flat spiders.
inline std::optional<Normalization> spider_normalization(const Spider& s) {
    const std::size_t d = s.dim(), m = s.tips.size();
    if (m < d) return std::nullopt;
    std::vector<std::size_t> pick(d), best;
    Rational best_det = 0;
    for (std::size_t i = 0; i < d; ++i) pick[i] = i;
    while (true) {
        std::vector<Point> cols;
        for (auto i : pick) cols.push_back(s.tips[i] - s.apex);
        Rational det = abs_of(detail::determinant(cols));
        if (det > best_det) {
            best_det = det;
            best = pick;
        }
        std::size_t j = d;
        while (j > 0 && pick[j - 1] == m - d + j - 1) --j;
        if (j == 0) break;
        ++pick[j - 1];
        for (std::size_t q = j; q < d; ++q) pick[q] = pick[q - 1] + 1;
    }
    if (best_det == 0) return std::nullopt;
    std::vector<Point> b(d, zero_point(d));
    for (std::size_t c = 0; c < d; ++c) {
        Point leg = s.tips[best[c]] - s.apex;
        for (std::size_t r = 0; r < d; ++r) b[r][c] = leg[r];
    }
    return Normalization{*detail::inverse(b), s.apex, best_det};
}

/// Touch raster of a piece union on a frame with one cell of margin.
inline GridSet touch_raster(const std::vector<ConvexPiece>& pieces, const GridFrame& frame, std::size_t cap) {
    return rasterize_pieces(pieces, frame, CellTest::touch, cap);
}

/// Audit of k -> vol((1/k) A[k]) for k = 1..kmax over a union of convex pieces.
inline AuditReport audit_pieces(const std::vector<ConvexPiece>& original, const AuditOptions& opt,
                                const std::optional<Normalization>& norm = std::nullopt) {
    if (opt.kmax < 2) throw InvalidArgument("k_max must be at least 2");
    if (opt.refine < 0) throw InvalidArgument("refinement count must be non-negative");
    const std::size_t d = original.front().dim();
    AuditReport rep;
    std::vector<ConvexPiece> pieces = original;
    if (norm) {
        Point t = zero_point(d);
        for (std::size_t i = 0; i < d; ++i) t[i] = -dot(norm->matrix[i], norm->origin);
        for (auto& p : pieces) p = p.mapped(norm->matrix, t);
        rep.volume_factor = norm->volume_factor;
    }
    Rational h = opt.h0 == 0 ? default_spacing(d) : opt.h0;
    if (!(h > 0)) throw InvalidArgument("grid spacing must be positive");
    for (int l = 0; l <= opt.refine; ++l) {
        rep.schedule.push_back(h);
        h /= 2;
    }
    rep.dim_deficient = affine_dimension(pieces) < d;
    ConvexPiece hull = hull_piece(pieces);
    detail::BoundCache cache(pieces, rep.schedule, opt.bounds);

    std::vector<int> level(static_cast<std::size_t>(opt.kmax + 1), -1);
    for (std::int64_t k = 1; k <= opt.kmax; ++k) {
        AuditEntry e;
        e.k = k;
        rep.entries.push_back(e);
    }
    auto entry = [&](std::int64_t k) -> AuditEntry& { return rep.entries[static_cast<std::size_t>(k - 1)]; };

    // entry 1 at the coarsest level
    {
        auto t0 = std::chrono::steady_clock::now();
        try {
            entry(1).bound = cache.bound(1, 0);
            entry(1).h = rep.schedule[0];
            level[1] = 0;
        } catch (const CellCapExceeded& ex) {
            entry(1).error = ex.what();
        }
        entry(1).seconds = detail::elapsed(t0);
    }
    for (std::int64_t k = 1; k < opt.kmax; ++k) {
        AuditEntry& next = entry(k + 1);
        auto t0 = std::chrono::steady_clock::now();
        Verdict v = Verdict::inconclusive;
        try {
            if (detail::piece_keys(cache.scaled(k)) == detail::piece_keys(cache.scaled(k + 1))) {
                // identical piece sets, hence identical sets and volumes
                int l = std::max(level[static_cast<std::size_t>(k)], 0);
                next.bound = cache.bound(k + 1, l);
                next.h = rep.schedule[static_cast<std::size_t>(l)];
                level[static_cast<std::size_t>(k + 1)] = l;
                v = Verdict::nondecreasing;
            } else {
                for (int l = 0; l <= opt.refine; ++l) {
                    const VolumeBound& a = cache.bound(k, l);
                    const VolumeBound& b = cache.bound(k + 1, l);
                    next.bound = b;
                    next.h = rep.schedule[static_cast<std::size_t>(l)];
                    level[static_cast<std::size_t>(k + 1)] = l;
                    if (l > level[static_cast<std::size_t>(k)]) {
                        entry(k).bound = a;
                        entry(k).h = next.h;
                        level[static_cast<std::size_t>(k)] = l;
                    }
                    v = compare_bounds(a, b);
                    if (v != Verdict::inconclusive) break;
                }
            }
        } catch (const CellCapExceeded& ex) {
            next.error = ex.what();
        }
        next.verdict = v;
        next.seconds = detail::elapsed(t0);
    }

    for (std::int64_t k = 1; k <= opt.kmax; ++k) {
        int l = level[static_cast<std::size_t>(k)];
        if (l < 0) continue;
        try {
            const VolumeBound& c = cache.hull_bound(hull, l);
            if (c.upper - entry(k).bound.lower <= 2 * (c.upper - c.lower)) rep.hull_reached = true;
        } catch (const CellCapExceeded&) {
        }
    }

    for (auto& e : rep.entries) {
        e.bound.lower *= rep.volume_factor;
        e.bound.upper *= rep.volume_factor;
    }

    if (opt.hausdorff) {
        Point lo, hi;
        pieces_bbox(original, lo, hi);
        ConvexPiece target_hull = hull_piece(original);
        GridFrame frame = GridFrame::covering(lo, hi, rep.schedule[0], 1);
        rep.hausdorff_slack = to_double(rep.schedule[0]) * std::sqrt(static_cast<double>(d));
        try {
            GridSet target = touch_raster({target_hull}, frame, opt.bounds.cap);
            for (std::int64_t k = 1; k <= opt.kmax; ++k) {
                auto t0 = std::chrono::steady_clock::now();
                auto scaled = norm ? kfold_scaled_pieces(original, k) : cache.scaled(k);
                entry(k).hausdorff = hausdorff(touch_raster(scaled, frame, opt.bounds.cap), target);
                entry(k).seconds += detail::elapsed(t0);
            }
        } catch (const CellCapExceeded&) {
        }
    }
    return rep;
}

inline AuditReport audit_monotonicity(const SetSpec& spec, const AuditOptions& opt) {
    require_volume_semantics(spec);
    std::optional<Normalization> norm;
    if (const auto* s = std::get_if<SpiderSpec>(&spec.body); s && opt.normalize) norm = spider_normalization(to_spider(*s));
    return audit_pieces(to_pieces(spec), opt, norm);
}

struct HausdorffSeries {
    std::vector<std::int64_t> ks;
    std::vector<double> values;
    /// Grid measurement error bound h * sqrt(d).
    double slack = 0;
    /// alpha in d_H ~ C k^(-alpha), least squares over the positive values; NaN when fewer than two.
    double exponent = std::nan("");
};

inline HausdorffSeries hausdorff_convergence(const SetSpec& spec, const std::vector<std::int64_t>& ks, const Rational& h,
                                             std::size_t cap = kDefaultCellCap) {
    auto pieces = to_pieces(spec);
    const std::size_t d = spec.dim;
    if (affine_dimension(pieces) < d) throw InvalidArgument("Hausdorff convergence needs a full-dimensional set");
    Point lo, hi;
    pieces_bbox(pieces, lo, hi);
    GridFrame frame = GridFrame::covering(lo, hi, h, 1);
    GridSet target = touch_raster({hull_piece(pieces)}, frame, cap);
    HausdorffSeries s;
    s.ks = ks;
    s.slack = to_double(h) * std::sqrt(static_cast<double>(d));
    std::vector<double> lx, ly;
    for (auto k : ks) {
        double v = hausdorff(touch_raster(kfold_scaled_pieces(pieces, k), frame, cap), target);
        s.values.push_back(v);
        if (v > 0) {
            lx.push_back(std::log(static_cast<double>(k)));
            ly.push_back(std::log(v));
        }
    }
    if (lx.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= static_cast<double>(lx.size());
        my /= static_cast<double>(lx.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        if (sxx > 0) s.exponent = -sxy / sxx;
    }
    return s;
}

}  // namespace mksum
