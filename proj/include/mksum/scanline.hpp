#pragma once

// Exact rasterization of convex pieces. A cell box c + (h/2)[-1,1]^d relates to
// a convex piece P through finitely many normals n (see spanned_normals):
//   inside : <n,c> + (h/2)|n|_1 <= h_P(n)   for all n     (box within P)
//   touch  : <n,c> - (h/2)|n|_1 <= h_P(n)   for all n     (closed box meets P)
//   open   : <n,c> - (h/2)|n|_1 <  h_P(n)   for all n     (open box meets int P)
// Each becomes an integer inequality <n,i> <= bound on the cell index i, and
// the cells of a row along the last axis form an interval.

#include <cstdint>
#include <vector>

#include "mksum/gilbert.hpp"
#include "mksum/grid.hpp"
#include "mksum/pieces.hpp"

namespace mksum {

enum class CellTest { inside, touch, open };

struct LatticeConstraint {
    std::vector<std::int64_t> normal;
    std::int64_t bound = 0;  // <normal, i> <= bound
};

namespace detail {

inline std::int64_t clamp_to_int64(const BigInt& z) {
    static const BigInt lim = BigInt(std::int64_t{1} << 60);
    if (z > lim) return std::int64_t{1} << 60;
    if (z < -lim) return -(std::int64_t{1} << 60);
    return z.convert_to<std::int64_t>();
}

inline std::int64_t floor_div(__int128 a, __int128 b) {
    __int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return static_cast<std::int64_t>(q);
}

inline std::int64_t ceil_div(__int128 a, __int128 b) {
    __int128 q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return static_cast<std::int64_t>(q);
}

}  // namespace detail

/// Integer constraints on cell indices of `frame` expressing `test` against P.
inline std::vector<LatticeConstraint> lattice_constraints(const ConvexPiece& piece, const GridFrame& frame,
                                                          CellTest test) {
    std::vector<LatticeConstraint> out;
    const std::size_t d = frame.dim();
    if (piece.dim() != d) throw InvalidArgument("piece and grid dimensions differ");
    for (const auto& n0 : piece.normals()) {
        for (int sign : {1, -1}) {
            Point n;
            std::vector<std::int64_t> ni;
            Rational l1 = 0, sum = 0;
            for (const auto& c : n0) {
                BigInt v = sign > 0 ? c : BigInt(-c);
                n.emplace_back(v);
                ni.push_back(to_int64(v));
                l1 += abs_of(Rational(v));
                sum += Rational(v);
            }
            Rational beta = (piece.support(n) - dot(n, frame.anchor)) / frame.h - sum / 2;
            beta += test == CellTest::inside ? Rational(-l1 / 2) : Rational(l1 / 2);
            BigInt b = test == CellTest::open ? BigInt(ceil_of(beta) - 1) : floor_of(beta);
            out.push_back({std::move(ni), detail::clamp_to_int64(b)});
        }
    }
    return out;
}

/// Marks the cells of `grid` passing `test` against P (OR into existing bits).
/// Touch rasterization requires P's bounding box to lie within the frame box.
inline void paint_piece(GridSet& grid, const ConvexPiece& piece, CellTest test) {
    const GridFrame& f = grid.frame();
    const std::size_t d = f.dim();
    if ((test == CellTest::inside || test == CellTest::open) && !piece.full_dimensional()) return;
    if (test == CellTest::touch) {
        for (std::size_t j = 0; j < d; ++j) {
            Rational top = f.anchor[j] + f.h * Rational(f.extents[j]);
            if (piece.bbox_lo()[j] < f.anchor[j] || piece.bbox_hi()[j] > top)
                throw InvalidArgument("piece extends outside the grid frame");
        }
    }
    auto cons = lattice_constraints(piece, f, test);
    // index ranges from the piece's bounding box (touch range is the widest)
    std::vector<std::int64_t> lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
        Rational a = (piece.bbox_lo()[j] - f.anchor[j]) / f.h;
        Rational b = (piece.bbox_hi()[j] - f.anchor[j]) / f.h;
        lo[j] = std::max<std::int64_t>(0, detail::clamp_to_int64(ceil_of(a)) - 1);
        hi[j] = std::min<std::int64_t>(f.extents[j] - 1, detail::clamp_to_int64(floor_of(b)));
        if (lo[j] > hi[j]) return;
    }
    std::vector<std::int64_t> prefix(lo.begin(), lo.end() - 1);
    const std::size_t last = d - 1;
    while (true) {
        std::int64_t zlo = lo[last], zhi = hi[last];
        for (const auto& c : cons) {
            __int128 r = c.bound;
            for (std::size_t j = 0; j < last; ++j) r -= static_cast<__int128>(c.normal[j]) * prefix[j];
            std::int64_t nz = c.normal[last];
            if (nz > 0)
                zhi = std::min(zhi, detail::floor_div(r, nz));
            else if (nz < 0)
                zlo = std::max(zlo, detail::ceil_div(r, nz));
            else if (r < 0)
                zhi = zlo - 1;
            if (zlo > zhi) break;
        }
        if (zlo <= zhi) grid.set_run(grid.row_of(prefix.data()), zlo, zhi);
        std::size_t j = last;
        while (j > 0) {
            --j;
            if (++prefix[j] <= hi[j]) break;
            prefix[j] = lo[j];
            if (j == 0) return;
        }
        if (last == 0) return;
    }
}

inline GridSet rasterize_pieces(const std::vector<ConvexPiece>& pieces, const GridFrame& frame, CellTest test,
                                std::size_t cap = kDefaultCellCap) {
    GridMode mode = test == CellTest::inside ? GridMode::inner : GridMode::outer;
    GridSet g(frame, mode, cap);
    for (const auto& p : pieces) paint_piece(g, p, test);
    return g;
}

/// Supercover of [p, q]: every cell whose closed box meets the segment.
inline GridSet rasterize_segment(const Point& p, const Point& q, const GridFrame& frame,
                                 std::size_t cap = kDefaultCellCap) {
    return rasterize_pieces({ConvexPiece::from_points(p.size(), {p, q})}, frame, CellTest::touch, cap);
}

/// Rasterization of a convex body known through its support oracle.
/// outer: cells whose centre lies within (h sqrt d)/2 + tol of the body;
/// inner: cells all of whose 2^d corners are within tol of the body.
inline GridSet rasterize_convex(const SupportOracle& body, const GridFrame& frame, GridMode mode, double tol,
                                std::size_t cap = kDefaultCellCap) {
    if (mode == GridMode::exact) throw InvalidArgument("rasterize_convex: mode must be inner or outer");
    GridSet g(frame, mode, cap);
    const std::size_t d = frame.dim();
    const double h = to_double(frame.h);
    const double reach = 0.5 * h * std::sqrt(static_cast<double>(d)) + tol;
    std::vector<double> anchor = to_doubles(frame.anchor);
    std::vector<std::int64_t> idx(d, 0);
    std::vector<double> q(d);
    const std::size_t total = frame.cells();
    for (std::size_t f = 0; f < total; ++f) {
        detail::unflatten(f, frame.extents, idx);
        bool mark = true;
        if (mode == GridMode::outer) {
            for (std::size_t j = 0; j < d; ++j) q[j] = anchor[j] + h * (static_cast<double>(idx[j]) + 0.5);
            mark = gilbert_distance(body, q, tol).lower <= reach;
        } else {
            for (std::size_t corner = 0; corner < (std::size_t{1} << d) && mark; ++corner) {
                for (std::size_t j = 0; j < d; ++j)
                    q[j] = anchor[j] + h * static_cast<double>(idx[j] + static_cast<std::int64_t>((corner >> j) & 1u));
                mark = gilbert_distance(body, q, tol).upper <= tol;
            }
        }
        if (mark) g.set(idx);
    }
    return g;
}

}  // namespace mksum
