#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ponconf/poncelet.hpp"
#include "ponconf/ring_ops.hpp"

using namespace ponconf;

namespace {
constexpr double kPi = std::numbers::pi;

PointRing polygon(int m, int q = 1, double t0 = 0.37, ConfocalFamily fam = {4, 1}) {
    return poncelet_polygon(fam, m, q, t0);
}

PointRing random_polygon(int m, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    PointRing r;
    r.label = "R";
    for (int j = 0; j < m; ++j) {
        double t = 2 * kPi * j / m + jitter(rng);
        double rad = 1 + jitter(rng);
        r.elements.emplace_back(rad * std::cos(t), rad * std::sin(t), 1.0);
    }
    return r;
}
}  // namespace

TEST(VOp, SquareEdgesAndPentagram) {
    auto sq = regular_polygon(4);
    auto edges = v_op(sq, 1);
    ASSERT_EQ(edges.size(), 4u);
    for (long j = 0; j < 4; ++j) {
        EXPECT_LT(incidence_residual(sq[j], edges[j]), 1e-15);
        EXPECT_LT(incidence_residual(sq[j + 1], edges[j]), 1e-15);
    }
    auto star = v_op(regular_polygon(5), 2);
    for (long j = 0; j < 5; ++j) EXPECT_NEAR(std::abs(star[j][2]) / std::hypot(star[j][0], star[j][1]), std::cos(2 * kPi / 5), 1e-12);
    EXPECT_EQ(star.trail.back().op, "join");
    EXPECT_EQ(star.shift, 2);
}

TEST(VOp, ZeroShiftNeedsSupport) {
    auto p = regular_polygon(6);
    try {
        v_op(p, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CoincidentPoints);
    }
    Conic unit(diag(1.0, 1.0, -1.0));
    auto tangents = v_op(p, 0, unit);
    auto back = w_op(tangents, 0, unit);
    EXPECT_LT(ring_distance(back, p), 1e-9);
}

TEST(WOp, InvertsVOp) {
    auto p = polygon(7);
    for (int i = 1; i < 7; ++i) EXPECT_LT(ring_distance(w_op(v_op(p, i), i), p), 1e-9) << i;
    auto r = random_polygon(9, 3);
    for (int i = 1; i < 9; ++i) EXPECT_LT(ring_distance(w_op(v_op(r, i), i), r), 1e-9) << i;
}

TEST(WOp, SquareDiagonalsDegenerate) {
    auto edges = v_op(regular_polygon(4, 1.0, 0.25), 1);
    // opposite edges are parallel: the meets double up at infinity
    auto pts = w_op(edges, 2);
    EXPECT_LT(distance(pts[0], pts[2]), 1e-12);
    EXPECT_NEAR(pts[0][2], 0.0, 1e-12);
}

TEST(WOp, TouchPointsOfCausticTangents) {
    ConfocalFamily fam(4, 1);
    double lambda = solve_caustic(fam, 7, 2);
    auto p = build_polygon(confocal_pair(fam, lambda, 7, 2, 0.2));
    Conic caustic = fam.member(lambda);
    auto touch = w_op(v_op(p, 1), 0, caustic);
    for (const auto& t : touch.elements) EXPECT_LT(conic_residual(caustic, t), 1e-9);
}

TEST(Grid, RingsFitConicsAcrossSizes) {
    for (int m = 7; m <= 13; ++m) {
        auto p = polygon(m);
        ConfocalFamily fam(4, 1);
        Grid g = build_grid(v_op(p, 1), fam.member(solve_caustic(fam, m, 1)));
        EXPECT_EQ(static_cast<int>(g.rings.size()), grid_depth(m) + 1);
        for (double r : g.fit_residuals) EXPECT_LT(r, 1e-7) << m;
        EXPECT_EQ(g.codependence_rank, 2) << m;
    }
}

TEST(Grid, EvenSizeExcludesHalf) {
    auto g = build_grid(v_op(polygon(10), 1));
    EXPECT_EQ(g.rings.size(), 5u);  // P0..P4
    EXPECT_EQ(g.rings.back().label, "P4");
}

TEST(Grid, RegularHeptagonRingsAreConcentricCircles) {
    auto p = regular_polygon(7, 1.0, 0.1);
    Conic caustic(diag(1.0, 1.0, -std::pow(std::cos(kPi / 7), 2)));
    Grid g = build_grid(v_op(p, 1), caustic);
    for (const auto& c : g.conics) {
        auto m = c.matrix();
        EXPECT_NEAR(m[0][0], m[1][1], 1e-9);
        EXPECT_NEAR(m[0][1], 0, 1e-9);
        EXPECT_NEAR(m[0][2], 0, 1e-9);
        EXPECT_NEAR(m[1][2], 0, 1e-9);
    }
}

TEST(Grid, TwentyNineGonHasFourteenRings) {
    auto g = build_grid(v_op(polygon(29, 1, 0.1, {2, 1}), 1));
    EXPECT_EQ(g.rings.size(), 15u);  // touch points plus 14 rings
    EXPECT_EQ(g.codependence_rank, 2);
}

TEST(Grid, RandomPolygonFailsStrictFit) {
    try {
        build_grid(v_op(random_polygon(9, 11), 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_TRUE(e.code() == ErrorCode::ConicFitFailure || e.code() == ErrorCode::DegeneratePointSet);
    }
}

TEST(DualGrid, EnvelopesFitAcrossSizes) {
    ConfocalFamily fam(4, 1);
    for (int m = 7; m <= 13; ++m) {
        auto p = polygon(m);
        DualGrid d = build_dual_grid(p, fam.outer());
        EXPECT_EQ(static_cast<int>(d.rings.size()), grid_depth(m) + 1);
        for (double r : d.fit_residuals) EXPECT_LT(r, 1e-7);
        EXPECT_EQ(d.dependence_rank, 2) << m;
        // L1 are the polygon edges
        EXPECT_LT(ring_distance(d.rings[1], v_op(p, 1)), 1e-15);
    }
}

TEST(Pentagram, RegularPentagonProjectivelyFixed) {
    auto p = regular_polygon(5, 1.0, 0.3);
    auto t = w_op(v_op(p, 2), 1);
    auto e = ring_equivalence(p, t);
    EXPECT_LT(e.residual, 1e-9);
}

TEST(Pentagram, CommuteOnPonceletOctagon) {
    auto p = polygon(8, 1, 0.9);
    EXPECT_LT(commute_residual(p, 2, 3), 1e-7);
    EXPECT_GT(commute_residual(random_polygon(8, 5), 2, 3), 1e-3);
}

TEST(Pentagram, RangeChecked) {
    EXPECT_THROW(pentagram(polygon(8), 1), Error);
    EXPECT_THROW(pentagram(polygon(8), 4), Error);
}

TEST(OddEquivalence, OddSizesFound) {
    for (int m : {7, 9, 11}) {
        auto e = odd_equivalence(polygon(m), 2);
        EXPECT_LT(e.residual, 1e-6) << m;
    }
}

TEST(OddEquivalence, EvenSizeNotFound) {
    try {
        odd_equivalence(polygon(8), 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoEquivalenceFound);
    }
}

TEST(OddEquivalence, TransformsCommute) {
    auto p = polygon(9);
    auto e2 = odd_equivalence(p, 2);
    auto e3 = odd_equivalence(p, 3);
    ProjectiveTransform ab = e2.transform.compose(e3.transform), ba = e3.transform.compose(e2.transform);
    double worst = 0;
    for (const auto& x : p.elements) worst = std::max(worst, distance(ab.apply(x), ba.apply(x)));
    EXPECT_LT(worst, 1e-6);
}

TEST(OddEquivalence, SymmetricChartSignatures) {
    // base point on the axis keeps the polygon mirror symmetric, so the maps are diagonal
    auto p = polygon(9, 1, 0.0);
    auto e2 = odd_equivalence(p, 2);
    auto e3 = odd_equivalence(p, 3);
    EXPECT_FALSE(e2.signature.empty());
    EXPECT_FALSE(e3.signature.empty());
}

TEST(Residuals, ClosureCommuteAndRingSwap) {
    auto p = polygon(10, 3, 0.4);
    EXPECT_LT(three_step_closure_residual(p, 2, 3, 4), 1e-6);
    EXPECT_LT(step_commute_residual(p, 2, 3, 4, 1), 1e-6);
    Grid g = build_grid(v_op(p, 1));
    EXPECT_LT(ring_swap_residual(g, 2, 4), 1e-6);
    EXPECT_LT(ring_swap_residual(g, 1, 3), 1e-6);
    EXPECT_GT(three_step_closure_residual(random_polygon(10, 2), 2, 3, 4), 1e-3);
}
