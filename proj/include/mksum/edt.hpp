#pragma once

// Exact Euclidean distance transform on the cell-centre lattice by separable
// lower envelopes of parabolas (Felzenszwalb-Huttenlocher), in integer
// arithmetic on index distances.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mksum/grid.hpp"

namespace mksum {

/// Squared index distances, flat row-major (last axis fastest), from each cell
/// centre to the nearest occupied cell centre. Multiply by h^2 for world units.
struct DistanceField {
    std::vector<std::int64_t> extents;
    std::vector<std::int64_t> squared;
};

namespace detail {

inline constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max() / 4;

// One-dimensional squared-distance transform of f (kFar = no site) into out.
// Envelope breakpoints are kept as exact fractions num/den with den > 0.
inline void edt_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& out, std::vector<std::int64_t>& v,
                   std::vector<__int128>& znum, std::vector<__int128>& zden) {
    const std::size_t n = f.size();
    v.assign(n, 0);
    znum.assign(n + 1, 0);
    zden.assign(n + 1, 1);
    out.assign(n, kFar);
    // breakpoint of parabolas rooted at p < q
    auto cut = [&](std::int64_t p, std::int64_t q, __int128& num, __int128& den) {
        num = static_cast<__int128>(f[static_cast<std::size_t>(q)]) + static_cast<__int128>(q) * q -
              f[static_cast<std::size_t>(p)] - static_cast<__int128>(p) * p;
        den = 2 * static_cast<__int128>(q - p);
    };
    std::ptrdiff_t k = -1;
    for (std::size_t qi = 0; qi < n; ++qi) {
        if (f[qi] >= kFar) continue;
        auto q = static_cast<std::int64_t>(qi);
        __int128 num = 0, den = 1;
        while (k >= 0) {
            cut(v[static_cast<std::size_t>(k)], q, num, den);
            // pop while the new breakpoint is at or left of the previous one (z[0] = -inf)
            if (k > 0 && num * zden[static_cast<std::size_t>(k)] <= znum[static_cast<std::size_t>(k)] * den) {
                --k;
                continue;
            }
            break;
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        if (k > 0) {
            znum[static_cast<std::size_t>(k)] = num;
            zden[static_cast<std::size_t>(k)] = den;
        }
    }
    if (k < 0) return;
    std::size_t j = 0;
    for (std::size_t qi = 0; qi < n; ++qi) {
        auto q = static_cast<__int128>(qi);
        while (static_cast<std::ptrdiff_t>(j) < k && znum[j + 1] < q * zden[j + 1]) ++j;
        std::int64_t p = v[j];
        std::int64_t dq = static_cast<std::int64_t>(qi) - p;
        out[qi] = dq * dq + f[static_cast<std::size_t>(p)];
    }
}

}  // namespace detail

inline DistanceField distance_transform(const GridSet& a) {
    if (a.empty()) throw InvalidArgument("distance_transform of an empty set");
    const auto& ext = a.extents();
    const std::size_t d = a.dim(), total = a.frame().cells();
    DistanceField field{ext, std::vector<std::int64_t>(total, detail::kFar)};
    a.for_each([&](const std::vector<std::int64_t>& idx) { field.squared[detail::flat_index(idx, ext)] = 0; });

    std::vector<std::int64_t> f, out, v;
    std::vector<__int128> znum, zden;
    std::size_t stride = 1;
    for (std::size_t axis = d; axis-- > 0;) {
        const auto n = static_cast<std::size_t>(ext[axis]);
        const std::size_t outer = total / (n * stride);
        f.resize(n);
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t s = 0; s < stride; ++s) {
                std::size_t base = o * n * stride + s;
                for (std::size_t i = 0; i < n; ++i) f[i] = field.squared[base + i * stride];
                detail::edt_1d(f, out, v, znum, zden);
                for (std::size_t i = 0; i < n; ++i) field.squared[base + i * stride] = out[i];
            }
        stride *= n;
    }
    return field;
}

/// Largest squared index distance from a cell of `from` to the nearest cell of `to`.
inline std::int64_t directed_hausdorff_sq(const GridSet& from, const GridSet& to) {
    if (!(from.frame() == to.frame())) throw InvalidArgument("hausdorff: sets must share a frame");
    if (from.empty() || to.empty()) throw InvalidArgument("hausdorff of an empty set");
    DistanceField dt = distance_transform(to);
    std::int64_t best = 0;
    from.for_each([&](const std::vector<std::int64_t>& idx) {
        best = std::max(best, dt.squared[detail::flat_index(idx, dt.extents)]);
    });
    return best;
}

/// Hausdorff distance between the cell-centre sets, in world units. The
/// distance between the underlying sets differs by at most h sqrt(d).
inline double hausdorff(const GridSet& a, const GridSet& b) {
    std::int64_t s = std::max(directed_hausdorff_sq(a, b), directed_hausdorff_sq(b, a));
    return std::sqrt(static_cast<double>(s)) * to_double(a.frame().h);
}

}  // namespace mksum
