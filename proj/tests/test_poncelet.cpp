#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ponconf/poncelet.hpp"

using namespace ponconf;

namespace {
constexpr double kPi = std::numbers::pi;
const Conic kUnit(diag(1.0, 1.0, -1.0));

Conic circle(double r) { return Conic(diag(1.0, 1.0, -r * r)); }

double angle_of(const Point& p) { return std::atan2(p[1] / p[2], p[0] / p[2]); }
}  // namespace

TEST(TangentsFromPoint, ExternalPoint) {
    Point p(2, 0, 1);
    auto [l1, l2] = tangent_lines_from_point(p, kUnit);
    for (const Line& l : {l1, l2}) {
        EXPECT_LT(incidence_residual(p, l), 1e-14);
        Point touch = pole(kUnit, l);
        EXPECT_LT(conic_residual(kUnit, touch), 1e-14);
        EXPECT_NEAR(touch[0] / touch[2], 0.5, 1e-14);
        EXPECT_NEAR(std::abs(touch[1] / touch[2]), std::sqrt(3.0) / 2, 1e-14);
    }
    // forward branch touches at positive y (counter-clockwise of p)
    Point t1 = pole(kUnit, l1);
    EXPECT_GT(t1[1] / t1[2], 0);
}

TEST(TangentsFromPoint, Errors) {
    auto code = [](const Point& p) {
        try {
            tangent_lines_from_point(p, kUnit);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;
    };
    EXPECT_EQ(code(Point(1, 0, 1)), ErrorCode::PointOnConic);
    EXPECT_EQ(code(Point(0, 0, 1)), ErrorCode::PointInsideConic);
}

TEST(PonceletStep, RegularPolygons) {
    auto s = poncelet_step(Point(1, 0, 1), std::nullopt, kUnit, circle(std::cos(kPi / 7)));
    EXPECT_NEAR(angle_of(s.point), 2 * kPi / 7, 1e-12);
    auto sq = poncelet_step(Point(1, 0, 1), std::nullopt, kUnit, circle(std::cos(kPi / 4)));
    EXPECT_NEAR(angle_of(sq.point), kPi / 2, 1e-12);
}

TEST(PonceletStep, PentagonPeriodFive) {
    Conic caustic = circle(std::cos(kPi / 5));
    Point start(std::cos(0.4), std::sin(0.4), 1.0);
    Point p = start;
    std::optional<Line> in;
    for (int i = 1; i <= 20; ++i) {
        auto s = poncelet_step(p, in, kUnit, caustic);
        p = s.point;
        in = s.line;
        if (i % 5 == 0) EXPECT_LT(distance(p, start), 1e-12) << i;
    }
}

TEST(PonceletStep, ReverseStepReturns) {
    ConfocalFamily fam(4, 1);
    Conic caustic = fam.member(0.4);
    Point p0 = fam.point_at(0.3);
    auto s = poncelet_step(p0, std::nullopt, fam.outer(), caustic);
    // from the new point, taking the incoming line again leads back
    auto [q1, q2] = line_conic_intersection(fam.outer(), s.line);
    Point back = distance(q1, s.point) > distance(q2, s.point) ? q1 : q2;
    EXPECT_LT(distance(back, p0), 1e-12);
    // and the other tangent moves on
    auto s2 = poncelet_step(s.point, s.line, fam.outer(), caustic);
    EXPECT_GT(distance(s2.point, p0), 1e-3);
}

TEST(RotationNumber, CircleClosedForm) {
    ConfocalFamily fam(1, 1);
    for (double r : {0.9, 0.6, 0.3}) {
        double lambda = 1 - r * r;
        EXPECT_NEAR(rotation_number(fam, lambda, 1000), std::acos(r) / kPi, 1e-3);
    }
}

TEST(RotationNumber, MonotoneInLambda) {
    ConfocalFamily fam(4, 1);
    double prev = 0;
    for (int i = 1; i <= 50; ++i) {
        double lambda = 0.98 * i / 50.0;
        double rho = rotation_number(fam, lambda, 1000);
        EXPECT_GE(rho, prev - 1e-9);
        EXPECT_LT(rho, 0.5);
        prev = rho;
    }
    EXPECT_LT(rotation_number(fam, 1e-6, 1000), 0.01);
}

TEST(SolveCaustic, CircleFamilyMatchesCosines) {
    ConfocalFamily fam(1, 1);
    for (auto [m, q] : {std::pair{7, 1}, {7, 3}}) {
        double lambda = solve_caustic(fam, m, q);
        EXPECT_NEAR(std::sqrt(1 - lambda), std::cos(q * kPi / m), 1e-9);
    }
}

TEST(SolveCaustic, EllipsePorism) {
    ConfocalFamily fam(4, 1);
    double lambda = solve_caustic(fam, 8, 1);
    EXPECT_NEAR(rotation_number(fam, lambda, 10000), 0.125, 2e-3);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    for (int i = 0; i < 16; ++i) {
        auto ring = trace_polygon(fam.outer(), fam.member(lambda), 8, u(rng));
        EXPECT_LT(*ring.closure_residual, 1e-9);
    }
}

TEST(SolveCaustic, InvalidWinding) {
    ConfocalFamily fam(4, 1);
    EXPECT_THROW(solve_caustic(fam, 8, 2), Error);
    EXPECT_THROW(solve_caustic(fam, 8, 4), Error);
    EXPECT_THROW(solve_caustic(fam, 5, 1), Error);
}

TEST(BuildPolygon, HeptagonCloses) {
    PonceletPair pair{kUnit, circle(std::cos(kPi / 7)), 7, 1, 0.3};
    auto ring = build_polygon(pair);
    EXPECT_EQ(ring.size(), 7u);
    EXPECT_LT(*ring.closure_residual, 1e-9);
    pair.t0 = 1.1;
    EXPECT_LT(*build_polygon(pair).closure_residual, 1e-9);
    for (long j = 0; j < 7; ++j) EXPECT_NEAR(std::remainder(angle_of(ring[j]) - 0.3 - 2 * kPi * j / 7, 2 * kPi), 0, 1e-12);
}

TEST(BuildPolygon, WrongCausticFails) {
    PonceletPair pair{kUnit, circle(0.5), 7, 1, 0.0};
    try {
        build_polygon(pair);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ClosureFailure);
    }
}

TEST(BuildPolygon, EdgesTangentAndSweepCloses) {
    ConfocalFamily fam(9, 1);
    double lambda = solve_caustic(fam, 9, 2);
    Conic caustic = fam.member(lambda);
    for (int k = 0; k < 64; ++k) {
        auto ring = build_polygon(confocal_pair(fam, lambda, 9, 2, 2 * kPi * k / 64));
        EXPECT_LT(*ring.closure_residual, 1e-7);
        for (long j = 0; j < 9; ++j) {
            Line edge = join(ring[j], ring[j + 1]);
            EXPECT_LT(dual_conic_residual(caustic.dual(), edge), 1e-9);
        }
    }
}

TEST(EllipsePoint, GeneralConicMatchesAxisAligned) {
    ConfocalFamily fam(4, 1);
    ProjectiveTransform rot(Mat3<double>{{{std::cos(0.5), -std::sin(0.5), 0.2}, {std::sin(0.5), std::cos(0.5), -0.1}, {0, 0, 1}}});
    Conic moved = rot.apply(fam.outer());
    for (double t : {0.0, 1.0, 2.5}) EXPECT_LT(conic_residual(moved, ellipse_point(moved, t)), 1e-12);
    EXPECT_LT(distance(ellipse_point(fam.outer(), 0.7), fam.point_at(0.7)), 1e-15);
}
