#pragma once

// Distance from a point to a convex body known only through its support
// oracle. The iteration is Gilbert's / Frank-Wolfe's, with the active set kept
// fully corrective (Wolfe's minimum-norm-point scheme) so that polytopes
// terminate finitely and interior points are detected exactly.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "mksum/errors.hpp"
#include "mksum/zonotope.hpp"

namespace mksum {

/// Maps a direction u to a point of the body maximizing <x, u>.
using SupportOracle = std::function<std::vector<double>(const std::vector<double>&)>;

struct DistanceBounds {
    double lower = 0;
    double upper = 0;
    std::vector<double> witness;
    std::size_t iterations = 0;
    /// False when floating-point stagnation stopped the iteration before the
    /// gap closed; the bounds remain valid.
    bool converged = true;
};

inline std::size_t default_iteration_cap(double tol) {
    double cap = 10.0 * std::ceil(1.0 / tol);
    if (!(cap < 1e15)) return static_cast<std::size_t>(1e15);
    return static_cast<std::size_t>(cap);
}

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Affine minimizer of |sum a_i p_i| subject to sum a_i = 1.
inline Eigen::VectorXd affine_min_norm(const std::vector<std::vector<double>>& pts) {
    const auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) kkt(i, j) = dot(pts[i], pts[j]);
        kkt(i, n) = 1;
        kkt(n, i) = 1;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = 1;
    Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    return sol.head(n);
}

}  // namespace detail

/// Bounds on dist(q, body). upper = |q - witness| with the witness a convex
/// combination of support points; lower from the duality gap and the
/// supporting hyperplane at the current iterate, clamped at 0.
inline DistanceBounds gilbert_distance(const SupportOracle& support, const std::vector<double>& q, double tol,
                                       std::size_t max_iter = 0) {
    if (!(tol > 0)) throw InvalidArgument("gilbert_distance: tol must be positive");
    if (max_iter == 0) max_iter = default_iteration_cap(tol);
    const std::size_t d = q.size();

    auto shifted_support = [&](const std::vector<double>& dir) {
        std::vector<double> s = support(dir);
        for (std::size_t j = 0; j < d; ++j) s[j] -= q[j];
        return s;
    };

    std::vector<double> start_dir(d, 0.0);
    start_dir[0] = 1.0;
    std::vector<std::vector<double>> corral{shifted_support(start_dir)};
    std::vector<double> weights{1.0};
    std::vector<double> x = corral[0];

    DistanceBounds best;
    best.upper = std::sqrt(detail::dot(x, x));
    best.lower = 0;
    best.witness = x;

    const double eps = 1e-14;
    for (std::size_t it = 0; it < max_iter; ++it) {
        best.iterations = it + 1;
        const double xx = detail::dot(x, x);
        const double xnorm = std::sqrt(xx);
        if (xnorm == 0.0) {
            best.upper = xnorm;
            best.lower = 0;
            best.witness = x;
            break;
        }
        std::vector<double> neg(d);
        for (std::size_t j = 0; j < d; ++j) neg[j] = -x[j];
        std::vector<double> s = shifted_support(neg);
        const double xs = detail::dot(x, s);
        const double gap = xx - xs;
        const double lower_gap = std::sqrt(std::max(0.0, xx - 2.0 * gap));
        const double lower_plane = std::max(0.0, xs / xnorm);
        const double lower = std::max(lower_gap, lower_plane);
        if (xnorm < best.upper || it == 0) {
            best.upper = xnorm;
            best.witness = x;
        }
        best.lower = std::max(best.lower, lower);
        if (best.upper - best.lower <= tol) break;
        if (gap <= eps * std::max(1.0, xx)) {
            best.converged = false;
            break;
        }
        bool duplicate = false;
        for (const auto& p : corral) {
            double diff = 0;
            for (std::size_t j = 0; j < d; ++j) diff = std::max(diff, std::abs(p[j] - s[j]));
            if (diff <= 1e-15 * std::max(1.0, std::sqrt(xx))) duplicate = true;
        }
        if (duplicate) {
            best.converged = false;
            break;
        }
        corral.push_back(s);
        weights.push_back(0.0);

        // Minor cycles: move to the affine minimizer, dropping points until it
        // lies in the relative interior of the corral's hull.
        for (std::size_t minor = 0; minor < 4 * (d + 2); ++minor) {
            Eigen::VectorXd alpha = detail::affine_min_norm(corral);
            bool interior = true;
            for (Eigen::Index i = 0; i < alpha.size(); ++i)
                if (alpha(i) <= eps) interior = false;
            if (interior) {
                for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = alpha(static_cast<Eigen::Index>(i));
                break;
            }
            double theta = 1.0;
            for (std::size_t i = 0; i < weights.size(); ++i) {
                double a = alpha(static_cast<Eigen::Index>(i));
                if (a <= eps && weights[i] - a > 0) theta = std::min(theta, weights[i] / (weights[i] - a));
            }
            for (std::size_t i = 0; i < weights.size(); ++i)
                weights[i] = theta * alpha(static_cast<Eigen::Index>(i)) + (1 - theta) * weights[i];
            std::vector<std::vector<double>> kept;
            std::vector<double> kept_w;
            for (std::size_t i = 0; i < weights.size(); ++i)
                if (weights[i] > eps) {
                    kept.push_back(corral[i]);
                    kept_w.push_back(weights[i]);
                }
            if (kept.empty()) {
                kept.push_back(corral.back());
                kept_w.push_back(1.0);
            }
            double total = 0;
            for (double w : kept_w) total += w;
            for (double& w : kept_w) w /= total;
            corral = std::move(kept);
            weights = std::move(kept_w);
        }
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t i = 0; i < corral.size(); ++i)
            for (std::size_t j = 0; j < d; ++j) x[j] += weights[i] * corral[i][j];
        if (it + 1 == max_iter) {
            throw Nonconvergence(best.lower, best.upper);
        }
    }
    for (std::size_t j = 0; j < d; ++j) best.witness[j] += q[j];
    best.lower = std::min(best.lower, best.upper);
    return best;
}

enum class Membership { inside, outside, boundary_band };

inline const char* to_string(Membership m) {
    switch (m) {
        case Membership::inside: return "inside";
        case Membership::outside: return "outside";
        default: return "boundary-band";
    }
}

/// Default distance tolerance: 1e-9 of the spider's diameter.
inline double default_tolerance(const Spider& s) {
    double diam = to_double(s.diameter_linf());
    return 1e-9 * std::max(diam, 1e-300);
}

/// Decides q in (1/k) B[k] by testing k q against every composition zonotope.
inline Membership membership_kfold(const Spider& s, std::int64_t k, const std::vector<double>& q, double tol) {
    s.validate();
    if (k < 1) throw InvalidArgument("membership_kfold requires k >= 1");
    if (!(tol > 0)) throw InvalidArgument("membership_kfold requires tol > 0");
    if (q.size() != s.dim()) throw InvalidArgument("query point dimension mismatch");
    std::vector<double> kq(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) kq[j] = static_cast<double>(k) * q[j];

    bool all_outside = true;
    for (const auto& c : compositions(k, static_cast<std::int64_t>(s.tips.size()))) {
        Zonotope z = zonotope_from_composition(s, c);
        Point lo, hi;
        z.bounding_box(lo, hi);
        double box_dist2 = 0;
        for (std::size_t j = 0; j < q.size(); ++j) {
            double l = to_double(lo[j]), h = to_double(hi[j]);
            double e = kq[j] < l ? l - kq[j] : (kq[j] > h ? kq[j] - h : 0.0);
            box_dist2 += e * e;
        }
        if (std::sqrt(box_dist2) > tol) continue;  // the box bound already certifies lower > tol
        auto bounds = gilbert_distance([&z](const std::vector<double>& u) { return z.support_witness(u); }, kq, tol);
        if (bounds.upper <= tol) return Membership::inside;
        if (!(bounds.lower > tol)) all_outside = false;
    }
    return all_outside ? Membership::outside : Membership::boundary_band;
}

/// Membership of q in conv(points).
inline Membership hull_membership(const std::vector<std::vector<double>>& points, const std::vector<double>& q,
                                  double tol) {
    if (points.empty()) throw InvalidArgument("hull_membership: empty point set");
    auto oracle = [&points](const std::vector<double>& u) {
        std::size_t best = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points.size(); ++i) {
            double v = detail::dot(points[i], u);
            if (v > best_v) {
                best_v = v;
                best = i;
            }
        }
        return points[best];
    };
    auto bounds = gilbert_distance(oracle, q, tol);
    if (bounds.upper <= tol) return Membership::inside;
    if (bounds.lower > tol) return Membership::outside;
    return Membership::boundary_band;
}

}  // namespace mksum
