#pragma once

// Boundary sums on grids: for a compact A whose boundary is connected,
// A + A = A + dA = dA + dA. A raster stands for the union of its closed cells,
// and the boundary cells cover the topological boundary of that union, so the
// exact cell sums (minkowski_cells) must agree.

#include <cmath>
#include <string>

#include "mksum/edt.hpp"
#include "mksum/grid.hpp"

namespace mksum {

struct BoundaryReport {
    /// Boundary used: all boundary cells, or those facing the unbounded complement.
    bool exterior_only = false;
    Rational vol_aa, vol_ab, vol_bb;  // A+A, A+dA, dA+dA
    double hausdorff_ab = 0, hausdorff_bb = 0;
    double hausdorff_limit = 0;  // 2 h sqrt(d)
    Rational shell;              // volume of the boundary cells of A+A
    bool passes = false;
};

struct BoundarySums {
    GridSet aa, ab, bb;
};

/// The three sumsets for a given boundary raster (no connectivity requirement).
inline BoundarySums boundary_sums(const GridSet& a, const GridSet& boundary, std::size_t cap = kDefaultCellCap,
                                  unsigned workers = 1) {
    return {minkowski_cells(a, a, cap, workers), minkowski_cells(a, boundary, cap, workers),
            minkowski_cells(boundary, boundary, cap, workers)};
}

/// Rejects rasters whose boundary is disconnected. When the full boundary has
/// several components but the part facing the unbounded complement is connected
/// (a set with holes), that part is used instead.
inline BoundaryReport boundary_sum_check(const GridSet& a, std::size_t cap = kDefaultCellCap, unsigned workers = 1) {
    if (a.empty()) throw InvalidArgument("boundary check on an empty set");
    BoundaryReport rep;
    GridSet boundary = boundary_cells(a);
    if (connected_components(boundary, true).count != 1) {
        boundary = exterior_boundary(a);
        std::size_t parts = connected_components(boundary, true).count;
        if (parts != 1)
            throw InvalidArgument("boundary is disconnected (" + std::to_string(parts) +
                                  " components facing the exterior); the sum identity needs a connected boundary");
        rep.exterior_only = true;
    }
    auto s = boundary_sums(a, boundary, cap, workers);
    rep.vol_aa = s.aa.volume();
    rep.vol_ab = s.ab.volume();
    rep.vol_bb = s.bb.volume();
    rep.hausdorff_ab = hausdorff(s.aa, s.ab);
    rep.hausdorff_bb = hausdorff(s.aa, s.bb);
    rep.hausdorff_limit = 2 * to_double(a.frame().h) * std::sqrt(static_cast<double>(a.dim()));
    rep.shell = boundary_cells(s.aa).volume();
    rep.passes = rep.hausdorff_ab <= rep.hausdorff_limit && rep.hausdorff_bb <= rep.hausdorff_limit &&
                 rep.vol_aa - rep.vol_bb <= rep.shell && rep.vol_aa - rep.vol_ab <= rep.shell;
    return rep;
}

/// Cells of spacing h whose centres lie in the closed disc (annulus when inner > 0)
/// centred at the origin, on a frame covering [-outer, outer]^2.
inline GridSet annulus_raster(const Rational& outer, const Rational& inner, const Rational& h) {
    GridFrame f = GridFrame::covering(Point{-outer, -outer}, Point{outer, outer}, h, 1);
    GridSet g(f, GridMode::exact);
    std::vector<std::int64_t> idx(2);
    for (idx[0] = 0; idx[0] < f.extents[0]; ++idx[0])
        for (idx[1] = 0; idx[1] < f.extents[1]; ++idx[1]) {
            Rational x = f.anchor[0] + h * (Rational(idx[0]) + Rational(1, 2));
            Rational y = f.anchor[1] + h * (Rational(idx[1]) + Rational(1, 2));
            Rational r2 = x * x + y * y;
            if (r2 <= outer * outer && r2 >= inner * inner) g.set(idx);
        }
    return g;
}

inline GridSet disc_raster(const Rational& radius, const Rational& h) { return annulus_raster(radius, 0, h); }

/// The square [lo, hi]^2 as cells of spacing h.
inline GridSet square_raster(const Rational& lo, const Rational& hi, const Rational& h) {
    GridFrame f = GridFrame::covering(Point{lo, lo}, Point{hi, hi}, h, 1);
    GridSet g(f, GridMode::exact);
    std::vector<std::int64_t> idx(2);
    for (idx[0] = 0; idx[0] < f.extents[0]; ++idx[0])
        for (idx[1] = 0; idx[1] < f.extents[1]; ++idx[1]) {
            Rational x = f.anchor[0] + h * idx[0], y = f.anchor[1] + h * idx[1];
            if (x >= lo && x + h <= hi && y >= lo && y + h <= hi) g.set(idx);
        }
    return g;
}

/// A disc of the given radius plus one far cell near the corner of [-1,1]^2:
/// a compact set whose boundary has two components.
inline GridSet disc_with_far_cell(const Rational& radius, const Rational& h) {
    GridFrame big = GridFrame::covering(Point{-1, -1}, Point{1, 1}, h);
    GridSet a = reframe(disc_raster(radius, h), big);
    a.set({big.extents[0] - 2, big.extents[1] - 2});
    return a;
}

}  // namespace mksum
