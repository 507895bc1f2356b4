#pragma once

// Certified volume bounds for finite unions of convex pieces, and for the
// scaled k-fold sums (1/k) A[k] of such unions.
//
// upper: cells whose open interior meets the interior of a full-dimensional
//        piece (lower-dimensional pieces have measure zero);
// lower: cells contained in a single piece, and in the plane also cells
//        covered by several pieces together (exact polygon subtraction).
// Cells between the two masks can be split further (octree) so that the band
// contributes at a finer spacing without rasterizing the whole frame finely.

#include <cstdint>
#include <vector>

#include "mksum/grid.hpp"
#include "mksum/pieces.hpp"
#include "mksum/polygon.hpp"
#include "mksum/scanline.hpp"
#include "mksum/zonotope.hpp"

namespace mksum {

struct BoundsOptions {
    std::size_t cap = kDefaultCellCap;
    unsigned workers = 1;
    /// Certify planar cells covered jointly by several pieces.
    bool planar_cover = true;
    /// Octree depth for cells between the masks; negative picks 0 in the plane and 3 otherwise.
    int refine_depth = -1;
};

inline int effective_depth(const BoundsOptions& opt, std::size_t d) {
    if (opt.refine_depth >= 0) return opt.refine_depth;
    return d <= 2 ? 0 : 3;
}

struct UnionRaster {
    GridSet inner;
    GridSet outer;
    VolumeBound bound;
};

namespace detail {

inline bool box_overlaps_open(const ConvexPiece& p, const Rational& x0, const Rational& y0, const Rational& h) {
    return p.bbox_lo()[0] < x0 + h && p.bbox_hi()[0] > x0 && p.bbox_lo()[1] < y0 + h && p.bbox_hi()[1] > y0;
}

// True when the closed cell is covered by the union of the polygons.
inline bool cell_covered(const Polygon& cell, const std::vector<const Polygon*>& polys) {
    std::vector<Polygon> rest{cell};
    for (const Polygon* p : polys) {
        std::vector<Polygon> next;
        for (const auto& r : rest) {
            auto parts = subtract(r, *p);
            next.insert(next.end(), parts.begin(), parts.end());
        }
        rest = std::move(next);
        if (rest.empty()) return true;
    }
    return rest.empty();
}

// Classifies the block of fine cells [i0, i0 + s)^d: 2 when inside one piece,
// 0 when its interior misses every piece, 1 otherwise.
inline int classify_block(const std::vector<std::size_t>& cand, const std::vector<std::vector<LatticeConstraint>>& inside,
                          const std::vector<std::vector<LatticeConstraint>>& open, const std::int64_t* i0,
                          std::int64_t s, std::size_t d) {
    bool meets = false;
    for (std::size_t p : cand) {
        bool in = true;
        for (const auto& c : inside[p]) {
            __int128 v = 0;
            for (std::size_t j = 0; j < d; ++j)
                v += static_cast<__int128>(c.normal[j]) * (i0[j] + (c.normal[j] > 0 ? s - 1 : 0));
            if (v > c.bound) {
                in = false;
                break;
            }
        }
        if (in) return 2;
        if (meets) continue;
        bool touch = true;
        for (const auto& c : open[p]) {
            __int128 v = 0;
            for (std::size_t j = 0; j < d; ++j)
                v += static_cast<__int128>(c.normal[j]) * (i0[j] + (c.normal[j] < 0 ? s - 1 : 0));
            if (v > c.bound) {
                touch = false;
                break;
            }
        }
        if (touch) meets = true;
    }
    return meets ? 1 : 0;
}

// Adds the fine-cell counts of the block to lower/upper, splitting undecided blocks.
inline void refine_block(const std::vector<std::size_t>& cand, const std::vector<std::vector<LatticeConstraint>>& inside,
                         const std::vector<std::vector<LatticeConstraint>>& open, std::vector<std::int64_t>& i0,
                         std::int64_t s, std::size_t d, std::int64_t& lower, std::int64_t& upper) {
    int c = classify_block(cand, inside, open, i0.data(), s, d);
    std::int64_t vol = 1;
    for (std::size_t j = 0; j < d; ++j) vol *= s;
    if (c == 2) {
        lower += vol;
        upper += vol;
        return;
    }
    if (c == 0) return;
    if (s == 1) {
        upper += vol;
        return;
    }
    std::int64_t half = s / 2;
    for (std::size_t m = 0; m < (std::size_t{1} << d); ++m) {
        std::vector<std::int64_t> child(i0);
        for (std::size_t j = 0; j < d; ++j)
            if (m >> j & 1) child[j] += half;
        refine_block(cand, inside, open, child, half, d, lower, upper);
    }
}

}  // namespace detail

inline UnionRaster union_bounds(const std::vector<ConvexPiece>& pieces, const GridFrame& frame,
                                const BoundsOptions& opt = {}) {
    UnionRaster r{GridSet(frame, GridMode::inner, opt.cap), GridSet(frame, GridMode::outer, opt.cap), {}};
    for (const auto& p : pieces) {
        if (!p.full_dimensional()) continue;
        paint_piece(r.inner, p, CellTest::inside);
        paint_piece(r.outer, p, CellTest::open);
    }
    if (opt.planar_cover && frame.dim() == 2) {
        std::vector<Polygon> polys;
        std::vector<const ConvexPiece*> full;
        for (const auto& p : pieces)
            if (p.full_dimensional()) {
                polys.push_back(p.polygon());
                full.push_back(&p);
            }
        GridSet band = r.outer;
        band.subtract(r.inner);
        std::vector<std::vector<std::int64_t>> cells;
        band.for_each([&](const std::vector<std::int64_t>& idx) { cells.push_back(idx); });
        std::vector<char> covered(cells.size(), 0);
        detail::parallel_for(cells.size(), opt.workers, [&](std::size_t c) {
            Rational x0 = frame.anchor[0] + frame.h * cells[c][0];
            Rational y0 = frame.anchor[1] + frame.h * cells[c][1];
            Polygon cell{Vec2{x0, y0}, Vec2{x0 + frame.h, y0}, Vec2{x0 + frame.h, y0 + frame.h},
                         Vec2{x0, y0 + frame.h}};
            std::vector<const Polygon*> near;
            for (std::size_t i = 0; i < full.size(); ++i)
                if (detail::box_overlaps_open(*full[i], x0, y0, frame.h)) near.push_back(&polys[i]);
            if (near.size() >= 2 && detail::cell_covered(cell, near)) covered[c] = 1;
        });
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (covered[c]) r.inner.set(cells[c]);
    }
    r.bound = {r.inner.volume(), r.outer.volume()};
    const int depth = effective_depth(opt, frame.dim());
    if (depth > 0) {
        const std::size_t d = frame.dim();
        const std::int64_t s = std::int64_t{1} << depth;
        GridFrame fine = frame;
        fine.h = frame.h / s;
        for (auto& e : fine.extents) e *= s;
        std::vector<const ConvexPiece*> full;
        std::vector<std::vector<LatticeConstraint>> inside, open;
        for (const auto& p : pieces)
            if (p.full_dimensional()) {
                full.push_back(&p);
                inside.push_back(lattice_constraints(p, fine, CellTest::inside));
                open.push_back(lattice_constraints(p, fine, CellTest::open));
            }
        GridSet band = r.outer;
        band.subtract(r.inner);
        std::vector<std::vector<std::int64_t>> cells;
        band.for_each([&](const std::vector<std::int64_t>& idx) { cells.push_back(idx); });
        std::vector<std::int64_t> lo(cells.size(), 0), up(cells.size(), 0);
        detail::parallel_for(cells.size(), opt.workers, [&](std::size_t c) {
            std::vector<std::size_t> cand;
            for (std::size_t i = 0; i < full.size(); ++i) {
                bool overlap = true;
                for (std::size_t j = 0; j < d && overlap; ++j) {
                    Rational x0 = frame.anchor[j] + frame.h * cells[c][j];
                    overlap = full[i]->bbox_lo()[j] < x0 + frame.h && full[i]->bbox_hi()[j] > x0;
                }
                if (overlap) cand.push_back(i);
            }
            std::vector<std::int64_t> i0(d);
            for (std::size_t j = 0; j < d; ++j) i0[j] = cells[c][j] * s;
            detail::refine_block(cand, inside, open, i0, s, d, lo[c], up[c]);
        });
        std::int64_t lsum = 0, usum = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            lsum += lo[c];
            usum += up[c];
        }
        Rational fine_cell = pow_int(fine.h, static_cast<unsigned>(d));
        Rational inner = r.inner.volume();
        r.bound = {inner + fine_cell * lsum, inner + fine_cell * usum};
    }
    return r;
}

/// Bounding box of a piece list.
inline void pieces_bbox(const std::vector<ConvexPiece>& pieces, Point& lo, Point& hi) {
    if (pieces.empty()) throw InvalidArgument("empty piece list");
    lo = pieces.front().bbox_lo();
    hi = pieces.front().bbox_hi();
    for (const auto& p : pieces)
        for (std::size_t j = 0; j < lo.size(); ++j) {
            lo[j] = std::min(lo[j], p.bbox_lo()[j]);
            hi[j] = std::max(hi[j], p.bbox_hi()[j]);
        }
}

/// Segments [apex, tip_i] of a spider as convex pieces.
inline std::vector<ConvexPiece> spider_pieces(const Spider& s) {
    s.validate();
    std::vector<ConvexPiece> out;
    for (const auto& t : s.tips) out.push_back(ConvexPiece(Zonotope(s.apex, {t - s.apex})));
    return out;
}

struct KfoldResult {
    VolumeBound bound;
    GridFrame frame;
    std::size_t piece_count = 0;
};

/// Bounds on vol((1/k) A[k]) for A the union of `pieces`, on the lattice of
/// spacing h covering A's bounding box (which contains (1/k) A[k]).
inline KfoldResult kfold_volume_bounds(const std::vector<ConvexPiece>& pieces, std::int64_t k, const Rational& h,
                                       const BoundsOptions& opt = {}) {
    Point lo, hi;
    pieces_bbox(pieces, lo, hi);
    GridFrame frame = GridFrame::covering(lo, hi, h);
    auto scaled = kfold_scaled_pieces(pieces, k);
    KfoldResult res;
    res.frame = frame;
    res.piece_count = scaled.size();
    res.bound = union_bounds(scaled, frame, opt).bound;
    return res;
}

inline KfoldResult kfold_volume_bounds(const Spider& s, std::int64_t k, const Rational& h,
                                       const BoundsOptions& opt = {}) {
    return kfold_volume_bounds(spider_pieces(s), k, h, opt);
}

/// Upper bound on vol((1/k) B[k]) from the k-fold sum of the supercover of B at
/// spacing h (world units). Coarser than kfold_volume_bounds by about the
/// thickness of the raster, but obtained by grid dilation alone.
inline Rational kfold_raster_upper(const Spider& s, std::int64_t k, const Rational& h,
                                   const BoundsOptions& opt = {}) {
    auto segs = spider_pieces(s);
    Point lo, hi;
    pieces_bbox(segs, lo, hi);
    GridFrame frame = GridFrame::covering(lo, hi, h);
    GridSet raster = rasterize_pieces(segs, frame, CellTest::touch, opt.cap);
    GridSet sum = kfold_cells(raster, k, opt.cap, opt.workers);
    return sum.volume() / pow_int(Rational(k), static_cast<unsigned>(s.dim()));
}

}  // namespace mksum
