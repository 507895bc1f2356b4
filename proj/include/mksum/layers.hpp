#pragma once

// Grid verifier for the layer inequality behind monotonicity of the axis spider
// B = [o,e_1] u ... u [o,e_d]: for B[k] <= M <= k conv(B), M a union of grid
// cells of spacing 1/n, with unit cells C_i and
//   mu_i = vol(C_i cap M),  lambda_i = vol(C_i cap (M + B)),
// it checks lambda_i >= max_{i' adjacent below} mu_{i'}, the per-layer bound
// sum lambda (layer t+1) >= (t+d)/(t+1) sum mu (layer t), the weight
// identities, vol((M+B)/(k+1)) >= vol(M/k) and the stability clause.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "mksum/combinatorics.hpp"
#include "mksum/grid.hpp"

namespace mksum {

struct LayerCheck {
    std::int64_t t = 0;  // mu layer; lambda layer is t + 1
    Rational sum_mu;
    Rational sum_lambda;
    Rational factor;  // (t+d)/(t+1)
    bool holds = false;
};

struct LayerReport {
    std::int64_t d = 0, k = 0, n = 0;
    std::vector<LayerCheck> layers;
    std::size_t cells_checked = 0;
    std::size_t cell_violations = 0;
    bool weights_ok = false;
    Rational vol_m;
    Rational vol_m_plus_b;
    bool volume_ok = false;  // vol((M+B)/(k+1)) >= vol(M/k)
    Rational delta;          // vol((M+B)/(k+1)) - vol(M/k)
    /// Stability clause (only below-threshold pairs leave it unset).
    std::optional<Rational> stability_constant;
    Rational stability_rhs;  // vol(k conv B) - C delta
    bool stability_ok = true;

    bool all_hold() const {
        for (const auto& l : layers)
            if (!l.holds) return false;
        return cell_violations == 0 && weights_ok && volume_ok && stability_ok;
    }
};

namespace detail {

inline GridFrame unit_frame(std::int64_t d, std::int64_t extent, std::int64_t n) {
    return GridFrame{zero_point(static_cast<std::size_t>(d)), Rational(1, n),
                     std::vector<std::int64_t>(static_cast<std::size_t>(d), extent)};
}

// sum over axes of floor(a_j / n) + 1
inline std::int64_t unit_level(const std::vector<std::int64_t>& a, std::int64_t n) {
    std::int64_t s = 0;
    for (auto x : a) s += x / n + 1;
    return s;
}

}  // namespace detail

/// Cells of the unit cells u >= 0 with sum(u_j + 1) <= k (the full-dimensional part of B[k]).
inline GridSet staircase_cells(std::int64_t d, std::int64_t k, std::int64_t n, std::int64_t extent) {
    GridSet g(detail::unit_frame(d, extent, n), GridMode::exact);
    for (std::size_t r = 0; r < g.rows(); ++r) {
        std::vector<std::int64_t> p(static_cast<std::size_t>(d));
        g.prefix_of(r, p.data());
        std::int64_t s = 0;
        for (std::size_t j = 0; j + 1 < p.size(); ++j) s += p[j] / n + 1;
        // last coordinate: floor(z/n) + 1 <= k - s
        std::int64_t units = k - s;
        if (units <= 0) continue;
        g.set_run(r, 0, std::min(extent, units * n) - 1);
    }
    return g;
}

/// Cells of spacing 1/n lying in the simplex k conv(B) = {x >= 0, sum x <= k}.
inline GridSet simplex_cells(std::int64_t d, std::int64_t k, std::int64_t n, std::int64_t extent) {
    GridSet g(detail::unit_frame(d, extent, n), GridMode::exact);
    for (std::size_t r = 0; r < g.rows(); ++r) {
        std::vector<std::int64_t> p(static_cast<std::size_t>(d));
        g.prefix_of(r, p.data());
        std::int64_t s = 0;
        for (std::size_t j = 0; j + 1 < p.size(); ++j) s += p[j] + 1;
        // sum of upper corners: s + z + 1 <= k n
        std::int64_t zmax = k * n - s - 1;
        if (zmax < 0) continue;
        g.set_run(r, 0, std::min(extent - 1, zmax));
    }
    return g;
}

/// Random M between the staircase and the simplex: each extra cell is kept with probability p.
inline GridSet random_sandwich(std::int64_t d, std::int64_t k, std::int64_t n, double p, std::mt19937_64& rng) {
    GridSet lo = staircase_cells(d, k, n, k * n);
    GridSet hi = simplex_cells(d, k, n, k * n);
    std::bernoulli_distribution keep(p);
    GridSet m = lo;
    hi.for_each([&](const std::vector<std::int64_t>& idx) {
        if (!m.test(idx) && keep(rng)) m.set(idx);
    });
    return m;
}

inline LayerReport layer_inequality_check(std::int64_t d, std::int64_t k, std::int64_t n, const GridSet& m,
                                 std::size_t cap = kDefaultCellCap, unsigned workers = 1) {
    require_dimension(d);
    if (k < 1 || n < 1) throw InvalidArgument("layer_inequality_check requires k >= 1 and n >= 1");
    const std::size_t du = static_cast<std::size_t>(d);
    if (!(m.frame() == detail::unit_frame(d, k * n, n)))
        throw InvalidArgument("M must live on the frame [0,k]^d with spacing 1/n");
    if (!staircase_cells(d, k, n, k * n).subset_of(m))
        throw InvalidArgument("sandwich precondition violated: M misses a cell of B[k]");
    if (!m.subset_of(simplex_cells(d, k, n, k * n)))
        throw InvalidArgument("sandwich precondition violated: M leaves k conv(B)");

    LayerReport rep;
    rep.d = d;
    rep.k = k;
    rep.n = n;

    // M + B: each axis segment [0, e_j] is the index set {t e_j : 0 <= t <= n}
    GridSet seg(detail::unit_frame(d, n + 1, n), GridMode::exact);
    for (std::size_t j = 0; j < du; ++j)
        for (std::int64_t t = 0; t <= n; ++t) {
            std::vector<std::int64_t> idx(du, 0);
            idx[j] = t;
            seg.set(idx);
        }
    GridSet mb = dilate(m, seg, cap, workers);
    // the lower-dimensional part of B[k] contributes B[k+1]'s full cells
    mb |= staircase_cells(d, k + 1, n, (k + 1) * n);

    const Rational cell = pow_int(Rational(1, n), static_cast<unsigned>(d));
    std::map<std::vector<std::int64_t>, std::int64_t> mu, lambda;
    auto accumulate = [&](const GridSet& g, std::map<std::vector<std::int64_t>, std::int64_t>& out) {
        g.for_each([&](const std::vector<std::int64_t>& a) {
            std::vector<std::int64_t> u(du);
            for (std::size_t j = 0; j < du; ++j) u[j] = a[j] / n;
            ++out[u];
        });
    };
    accumulate(m, mu);
    accumulate(mb, lambda);
    auto mass = [&](const std::map<std::vector<std::int64_t>, std::int64_t>& mp, const std::vector<std::int64_t>& u) {
        auto it = mp.find(u);
        return it == mp.end() ? std::int64_t{0} : it->second;
    };

    rep.weights_ok = true;
    for (std::int64_t t = std::max<std::int64_t>(0, k - d + 1); t <= k - 1; ++t) {
        LayerCheck lc;
        lc.t = t;
        lc.factor = Rational(t + d, t + 1);
        std::int64_t smu = 0, slam = 0;
        for (const auto& i : enumerate_layer(d, t)) {
            smu += mass(mu, i.coords);
            if (weight_sum_into_lower(i) != lc.factor) rep.weights_ok = false;
        }
        for (const auto& i : enumerate_layer(d, t + 1)) {
            std::int64_t lam = mass(lambda, i.coords);
            slam += lam;
            if (weight_sum_from_upper(i) != 1) rep.weights_ok = false;
            std::int64_t best = 0;
            for (std::size_t j = 0; j < du; ++j) {
                if (i.coords[j] == 0) continue;
                auto lower = i.coords;
                --lower[j];
                best = std::max(best, mass(mu, lower));
            }
            ++rep.cells_checked;
            if (lam < best) ++rep.cell_violations;
        }
        lc.sum_mu = cell * smu;
        lc.sum_lambda = cell * slam;
        lc.holds = lc.sum_lambda >= lc.factor * lc.sum_mu;
        rep.layers.push_back(lc);
    }

    rep.vol_m = cell * static_cast<std::int64_t>(m.count());
    rep.vol_m_plus_b = cell * static_cast<std::int64_t>(mb.count());
    Rational scaled_m = rep.vol_m / pow_int(Rational(k), static_cast<unsigned>(d));
    Rational scaled_mb = rep.vol_m_plus_b / pow_int(Rational(k + 1), static_cast<unsigned>(d));
    rep.volume_ok = scaled_mb >= scaled_m;
    rep.delta = scaled_mb - scaled_m;
    if (d >= 2 && k >= threshold_k(d)) {
        rep.stability_constant = stability_constant(d, k);
        Rational full = pow_int(Rational(k), static_cast<unsigned>(d)) / Rational(factorial(d));
        Rational delta = rep.delta > 0 ? rep.delta : Rational(0);
        rep.stability_rhs = full - *rep.stability_constant * delta;
        rep.stability_ok = rep.vol_m >= rep.stability_rhs;
    }
    return rep;
}

}  // namespace mksum
