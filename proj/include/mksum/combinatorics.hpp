#pragma once

// Exact lattice-layer counts, corner volumes of the unit cube and the
// stability constant of the layer argument for sums of segment spiders.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mksum/errors.hpp"
#include "mksum/rational.hpp"

namespace mksum {

/// A lattice point of the non-negative orthant; a member of layer t when its
/// coordinates sum to t.
struct LayerIndex {
    std::vector<std::int64_t> coords;

    std::int64_t level() const { return std::accumulate(coords.begin(), coords.end(), std::int64_t{0}); }
    std::size_t dim() const { return coords.size(); }
    auto operator<=>(const LayerIndex&) const = default;
};

inline BigInt binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline BigInt factorial(std::int64_t n) {
    BigInt r = 1;
    for (std::int64_t i = 2; i <= n; ++i) r *= i;
    return r;
}

/// k (k-1) ... (k-d+1)
inline BigInt falling_factorial(std::int64_t k, std::int64_t d) {
    BigInt r = 1;
    for (std::int64_t i = 0; i < d; ++i) r *= (k - i);
    return r;
}

inline void require_dimension(std::int64_t d) {
    if (d < 1) throw InvalidArgument("invalid dimension " + std::to_string(d));
}

/// Number of points of N^d with coordinate sum t.
inline BigInt layer_count(std::int64_t d, std::int64_t t) {
    require_dimension(d);
    if (t < 0) throw InvalidArgument("negative layer level " + std::to_string(t));
    return binomial(t + d - 1, d - 1);
}

/// All points of the layer, in lexicographic order.
inline std::vector<LayerIndex> enumerate_layer(std::int64_t d, std::int64_t t) {
    require_dimension(d);
    if (t < 0) throw InvalidArgument("negative layer level " + std::to_string(t));
    std::vector<LayerIndex> out;
    std::vector<std::int64_t> cur(static_cast<std::size_t>(d), 0);
    // Recursive fill: first coordinate ascending, remainder pushed to later coordinates.
    auto rec = [&](auto&& self, std::size_t pos, std::int64_t remaining) -> void {
        if (pos + 1 == cur.size()) {
            cur[pos] = remaining;
            out.push_back(LayerIndex{cur});
            return;
        }
        for (std::int64_t v = 0; v <= remaining; ++v) {
            cur[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, t);
    return out;
}

/// Volume of {x in [0,1]^d : x_1 + ... + x_d <= t}, by inclusion-exclusion over
/// the cube's faces (the Irwin-Hall distribution function).
inline Rational corner_volume(std::int64_t d, const Rational& t) {
    require_dimension(d);
    if (t < 0 || t > d) throw InvalidArgument("corner_volume: t = " + to_string(t) + " outside [0, d]");
    std::int64_t upto = to_int64(floor_of(t));
    Rational sum = 0;
    for (std::int64_t j = 0; j <= upto; ++j) {
        Rational term = Rational(binomial(d, j)) * pow_int(t - j, static_cast<unsigned>(d));
        if (j % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    return sum / Rational(factorial(d));
}

/// Smallest k for which the layer inequality yields monotonicity in dimension d.
inline std::int64_t threshold_k(std::int64_t d) {
    if (d < 2) throw InvalidArgument("threshold_k requires d >= 2, got " + std::to_string(d));
    return std::max<std::int64_t>(2, (d - 1) * (d - 2));
}

/// C(d,k) = k^d / (1 - k^d / ((k-d+2)(k+1)^(d-1))).
inline Rational stability_constant(std::int64_t d, std::int64_t k) {
    if (d < 2) throw InvalidArgument("stability_constant requires d >= 2");
    if (k < threshold_k(d))
        throw BelowThreshold("k = " + std::to_string(k) + " < " + std::to_string(threshold_k(d)) +
                             " for d = " + std::to_string(d));
    Rational kd = pow_int(Rational(k), static_cast<unsigned>(d));
    Rational denom = Rational(k - d + 2) * pow_int(Rational(k + 1), static_cast<unsigned>(d - 1));
    Rational ratio = kd / denom;
    return kd / (Rational(1) - ratio);
}

/// vol((1/k) B[k]) for B the union of the d segments [o, e_i]: binom(k, d) / k^d.
/// Zero when k < d.
inline Rational simplex_spider_volume(std::int64_t d, std::int64_t k) {
    require_dimension(d);
    if (k < 1) throw InvalidArgument("simplex_spider_volume requires k >= 1");
    return Rational(binomial(k, d)) / pow_int(Rational(k), static_cast<unsigned>(d));
}

/// Weight on the adjacency between i (layer t+1) and i - e_j (layer t): i_j / (t+1).
inline Rational adjacency_weight(const LayerIndex& upper, std::size_t axis) {
    std::int64_t t_plus_1 = upper.level();
    if (t_plus_1 <= 0) throw InvalidArgument("adjacency_weight on layer 0");
    return Rational(upper.coords[axis], t_plus_1);
}

/// Sum of adjacency weights leaving an index of layer t+1 (equals 1).
inline Rational weight_sum_from_upper(const LayerIndex& upper) {
    Rational s = 0;
    for (std::size_t j = 0; j < upper.dim(); ++j)
        if (upper.coords[j] > 0) s += adjacency_weight(upper, j);
    return s;
}

/// Sum of adjacency weights arriving at an index of layer t from layer t+1
/// (equals (t+d)/(t+1)).
inline Rational weight_sum_into_lower(const LayerIndex& lower) {
    Rational s = 0;
    for (std::size_t j = 0; j < lower.dim(); ++j) {
        LayerIndex up = lower;
        up.coords[j] += 1;
        s += adjacency_weight(up, j);
    }
    return s;
}

}  // namespace mksum
