#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mksum/counterexamples.hpp"

using namespace mksum;

namespace {

AxisBox box(std::initializer_list<std::int64_t> lo, std::initializer_list<std::int64_t> hi) {
    return AxisBox{point_from_ints(lo), point_from_ints(hi)};
}

// Random boxes with dyadic endpoints in [0, 1]^d, at most five of them.
BoxUnion random_family(std::mt19937_64& rng, std::size_t d) {
    std::uniform_int_distribution<int> count(1, 5), c(0, 16);
    BoxUnion u;
    for (int n = count(rng); n > 0; --n) {
        AxisBox b{zero_point(d), zero_point(d)};
        for (std::size_t j = 0; j < d; ++j) {
            int x = c(rng), y = c(rng);
            b.lo[j] = Rational(std::min(x, y), 16);
            b.hi[j] = Rational(std::max(x, y), 16);
        }
        u.push_back(b);
    }
    return u;
}

// Inclusion-exclusion over all sub-families.
Rational inclusion_exclusion(const BoxUnion& u) {
    const std::size_t d = u.front().dim();
    Rational total = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << u.size()); ++mask) {
        Rational v = 1;
        int bits = 0;
        for (std::size_t j = 0; j < d; ++j) {
            Rational lo = -1000, hi = 1000;
            for (std::size_t i = 0; i < u.size(); ++i)
                if (mask >> i & 1) {
                    lo = std::max(lo, u[i].lo[j]);
                    hi = std::min(hi, u[i].hi[j]);
                }
            v *= hi > lo ? Rational(hi - lo) : Rational(0);
        }
        for (std::size_t i = 0; i < u.size(); ++i) bits += mask >> i & 1;
        total += bits % 2 ? v : Rational(-v);
    }
    return total;
}

// Fine lattice count of cells of spacing 1/N in [0, 1/d]^d inside (1/m) S[m].
Rational cube_measure_lattice(std::int64_t d, std::int64_t m) {
    const std::int64_t n = m * d;  // box corners c/m and the window 1/d both land on the lattice
    const std::int64_t side = n / d;
    std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
    std::int64_t inside = 0;
    while (true) {
        // upper corner (idx + 1)/n: needs sum_j max(1, ceil(m (idx_j + 1) / n)) <= m
        std::int64_t s = 0;
        for (auto i : idx) s += std::max<std::int64_t>(1, (m * (i + 1) + n - 1) / n);
        if (s <= m) ++inside;
        std::size_t j = idx.size();
        bool done = true;
        while (j > 0) {
            --j;
            if (++idx[j] < side) {
                done = false;
                break;
            }
            idx[j] = 0;
        }
        if (done) break;
    }
    return Rational(inside) / pow_int(Rational(n), static_cast<unsigned>(d));
}

}  // namespace

TEST(BoxUnion, Examples) {
    EXPECT_EQ(box_union_volume({box({0, 0}, {2, 3})}), 6);
    EXPECT_EQ(box_union_volume({box({0, 0}, {1, 1}), box({2, 2}, {3, 3})}), 2);
    EXPECT_EQ(box_union_volume({box({0, 0}, {2, 2}), box({1, 1}, {3, 3})}), 7);
    EXPECT_EQ(box_union_volume({}), 0);
    // the seven-dimensional triple sum as two boxes
    BoxUnion two{box({0, 0, 0, 0, 0, 0, 0}, {4, 4, 4, 4, 1, 1, 1}), box({0, 0, 0, 0, 0, 0, 0}, {1, 1, 1, 1, 7, 7, 7})};
    EXPECT_EQ(box_union_volume(two), 598);
}

TEST(BoxUnion, Errors) {
    EXPECT_THROW(box_union_volume({box({0, 0}, {1, 1}), box({0, 0, 0}, {1, 1, 1})}), InvalidArgument);
    EXPECT_THROW(box_union_volume({box({0, 1}, {1, 0})}), InvalidArgument);
    BoxUnion many(21, box({0}, {1}));
    EXPECT_THROW(box_union_volume(many), InvalidArgument);
    BoxUnion twenty(20, box({0}, {1}));
    EXPECT_EQ(box_union_volume(twenty), 1);
}

TEST(BoxUnion, MatchesInclusionExclusion) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        auto u = random_family(rng, 1 + trial % 4);
        EXPECT_EQ(box_union_volume(u), inclusion_exclusion(u)) << "trial " << trial;
    }
}

TEST(BoxUnion, MonteCarloWithinThreeSigma) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0, 1);
    const int samples = 1000000;
    for (int fam = 0; fam < 20; ++fam) {
        std::size_t d = 1 + fam % 4;
        auto u = random_family(rng, d);
        std::vector<std::vector<double>> lo, hi;
        for (const auto& b : u) {
            lo.push_back(to_doubles(b.lo));
            hi.push_back(to_doubles(b.hi));
        }
        int hits = 0;
        std::vector<double> x(d);
        for (int s = 0; s < samples; ++s) {
            for (auto& c : x) c = unit(rng);
            for (std::size_t i = 0; i < u.size(); ++i) {
                bool in = true;
                for (std::size_t j = 0; j < d && in; ++j) in = lo[i][j] <= x[j] && x[j] <= hi[i][j];
                if (in) {
                    ++hits;
                    break;
                }
            }
        }
        double p = static_cast<double>(hits) / samples;
        double v = to_double(box_union_volume(u));
        double sigma = std::sqrt(std::max(v * (1 - v), 1e-12) / samples);
        EXPECT_LE(std::abs(p - v), 3 * sigma + 1e-9) << "family " << fam;
    }
}

TEST(BlockFamily, PairwiseVolumesAtReferenceParameters) {
    auto v = pairwise_sum_volumes(BlockFamily{3, 6, 4, 3});
    EXPECT_EQ(v.v12, 1);
    EXPECT_EQ(v.v13, 216);
    EXPECT_EQ(v.v23, 81);
    EXPECT_EQ(v.v123, 598);
    auto w = pairwise_sum_volumes(BlockFamily{1, 1, 4, 3});
    EXPECT_EQ(w.v12, 1);
    EXPECT_EQ(w.v13, 1);
    EXPECT_EQ(w.v23, 1);
    EXPECT_EQ(w.v123, 23);
    EXPECT_EQ(pairwise_sum_volumes(BlockFamily{0, 2, 2, 2}).v23, 0);
}

TEST(BlockFamily, ClosedFormsMatchSweep) {
    const Rational values[] = {0, Rational(1, 2), 1, 2, Rational(7, 3), 5};
    for (std::int64_t d1 = 1; d1 <= 7; ++d1)
        for (std::int64_t d2 = 1; d1 + d2 <= 8; ++d2)
            for (const auto& a : values)
                for (const auto& b : values) {
                    BlockFamily f{a, b, d1, d2};
                    auto s = pairwise_sum_volumes(f), c = pairwise_closed_form(f);
                    ASSERT_EQ(s.v12, c.v12);
                    ASSERT_EQ(s.v13, c.v13);
                    ASSERT_EQ(s.v23, c.v23);
                    ASSERT_EQ(s.v123, c.v123) << d1 << " " << d2 << " " << a << " " << b;
                }
}

TEST(BlockFamily, SetsAreStarShapedAndLowerDimensional) {
    std::mt19937_64 rng(3);
    for (const auto& f : {BlockFamily{3, 6, 4, 3}, BlockFamily{Rational(1, 2), 2, 1, 1}, BlockFamily{0, 0, 2, 2}}) {
        for (const auto& u : {f.a1(), f.a2(), f.a3()}) {
            EXPECT_TRUE(star_shaped_sampled(u, 50, rng));
            EXPECT_TRUE(lower_dimensional(u));
            EXPECT_EQ(box_union_volume(u), 0);
        }
    }
    // a box away from the origin is not star-shaped about it
    EXPECT_FALSE(star_shaped_sampled({box({1, 1}, {2, 2})}, 5, rng));
    EXPECT_FALSE(lower_dimensional({box({0, 0}, {1, 1})}));
    EXPECT_THROW(BlockFamily({1, 1, 0, 2}).validate(), InvalidArgument);
}

TEST(Gap, CertifiedSigns) {
    auto g = block_family_gap(BlockFamily{3, 6, 4, 3});
    // independent evaluation from the displayed volumes
    double ref = std::pow(598.0, 1.0 / 7) - 0.5 * (1 + std::pow(216.0, 1.0 / 7) + std::pow(81.0, 1.0 / 7));
    EXPECT_NEAR(g.gap, ref, 1e-12);
    EXPECT_NEAR(g.gap, -0.0216, 1e-3);
    EXPECT_TRUE(g.certified_negative());
    EXPECT_LE(g.lower, from_double(g.gap));
    EXPECT_GE(g.upper, from_double(g.gap));

    auto p = block_family_gap(BlockFamily{1, 1, 4, 3});
    EXPECT_NEAR(p.gap, std::pow(23.0, 1.0 / 7) - 1.5, 1e-12);
    EXPECT_NEAR(p.gap, 0.065, 1e-3);
    EXPECT_TRUE(p.certified_positive());

    auto z = block_family_gap(BlockFamily{0, 0, 3, 2});
    EXPECT_EQ(z.volumes.v13, 0);
    EXPECT_EQ(z.volumes.v23, 0);
    EXPECT_DOUBLE_EQ(z.gap, 0.5);
    EXPECT_TRUE(z.certified_positive());
}

TEST(Gap, RootEnclosures) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> num(1, 100000), den(1, 997), deg(1, 9);
    for (int trial = 0; trial < 200; ++trial) {
        Rational v(num(rng), den(rng));
        int d = deg(rng);
        auto r = root_interval(v, d);
        EXPECT_LE(pow_int(r.lo, static_cast<unsigned>(d)), v);
        EXPECT_GE(pow_int(r.hi, static_cast<unsigned>(d)), v);
        EXPECT_LE(to_double(r.hi - r.lo), 1e-11 * to_double(r.hi));
    }
    EXPECT_EQ(root_interval(0, 4).hi, 0);
    EXPECT_THROW(root_interval(-1, 3), InvalidArgument);
}

TEST(CubeMeasure, PlaneWindow) {
    auto r = cube_measure_check(2, 1);
    EXPECT_EQ(r.vol_c, 1);
    EXPECT_EQ(r.mu_even, Rational(1, 4));
    EXPECT_EQ(r.mu_odd, Rational(2, 9));
    EXPECT_TRUE(r.even_matches);
    EXPECT_TRUE(r.odd_smaller);
    auto r2 = cube_measure_check(2, 2);
    EXPECT_TRUE(r2.even_matches);
    EXPECT_TRUE(r2.odd_smaller);
}

TEST(CubeMeasure, SpaceWindowNeedsMultiplesOfThree) {
    auto r = cube_measure_check(3, 1);
    EXPECT_EQ(r.vol_c, Rational(8, 27));
    EXPECT_EQ(r.expected, Rational(1, 27));
    // (1/2) S[2] is a union of squares in R^3
    EXPECT_EQ(r.mu_even, 0);
    EXPECT_FALSE(r.even_matches);
    EXPECT_EQ(r.mu_odd, Rational(1, 27));
    EXPECT_EQ(r.mu_multiple, Rational(1, 27));
    EXPECT_TRUE(r.multiple_matches);
    EXPECT_TRUE(r.next_smaller);
    auto r3 = cube_measure_check(3, 3);
    EXPECT_TRUE(r3.even_matches);
    EXPECT_TRUE(r3.odd_smaller);
    EXPECT_THROW(cube_measure_check(4, 1), InvalidArgument);
    EXPECT_THROW(cube_measure_check(2, 0), InvalidArgument);
}

TEST(CubeMeasure, MatchesLatticeCount) {
    for (std::int64_t d = 2; d <= 3; ++d)
        for (std::int64_t m = 1; m <= 9; ++m) EXPECT_EQ(cube_measure(d, m), cube_measure_lattice(d, m)) << d << " " << m;
}

TEST(Ellipse, CircleAtTwo) {
    auto e = ellipse_for(2);
    EXPECT_EQ(e.p2, Rational(1, 4));
    EXPECT_EQ(e.q2, Rational(1, 4));
    auto r = ellipse_measure_check(2, 512);
    EXPECT_EQ(r.point_form, Rational(8, 9));
    EXPECT_TRUE(r.point_interior);
    EXPECT_LE(r.ratio_k.lower, 0.25);
    EXPECT_GE(r.ratio_k.upper, 0.25);
    EXPECT_NEAR(r.ratio_k.estimate, 0.25, 0.005);
    EXPECT_LT(r.ratio_next.upper, 0.25);
    EXPECT_THROW(ellipse_for(1), InvalidArgument);
}

TEST(Ellipse, PassesThroughBothPoints) {
    for (std::int64_t k = 2; k <= 8; ++k) {
        auto e = ellipse_for(k);
        Rational x1 = 1 - Rational(1, k), x2 = 1 - Rational(2, k), y2(1, k);
        EXPECT_EQ(x1 * x1 / e.p2, 1);
        EXPECT_EQ(x2 * x2 / e.p2 + y2 * y2 / e.q2, 1);
    }
}

TEST(Ellipse, RatioMatchesMidpointSampling) {
    // independent double-precision midpoint count over the quadrant
    for (std::int64_t k = 2; k <= 4; ++k) {
        auto e = ellipse_for(k);
        double p = std::sqrt(to_double(e.p2)), q = std::sqrt(to_double(e.q2));
        for (std::int64_t m : {k, k + 1}) {
            const int n = 1500;
            double hx = p / n, hy = q / n, hits = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double x = (i + 0.5) * hx, y = (j + 0.5) * hy;
                    if (x * x / (p * p) + y * y / (q * q) > 1) continue;
                    double a = std::max(1.0, std::ceil(m * x)), b = std::max(1.0, std::ceil(m * y));
                    if (a + b <= m) ++hits;
                }
            double ref = hits * hx * hy / (std::acos(-1.0) * p * q);
            auto r = ellipse_ratio(e, m, 1024);
            EXPECT_NEAR(r.estimate, ref, 2e-3) << k << " " << m;
            EXPECT_LE(r.lower, ref + 1e-3);
            EXPECT_GE(r.upper, ref - 1e-3);
        }
    }
}
