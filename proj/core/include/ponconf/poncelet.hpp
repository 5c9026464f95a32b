#pragma once

#include <optional>
#include <utility>

#include "ponconf/ring.hpp"

namespace ponconf {

// x^2/(A - lambda) + y^2/(B - lambda) = 1, squared semi-axes A >= B > 0 (A == B is the circle family)
struct ConfocalFamily {
    double A = 4.0;
    double B = 1.0;

    ConfocalFamily() = default;
    ConfocalFamily(double a2, double b2);
    static ConfocalFamily from_semi_axes(double a, double b) { return {a * a, b * b}; }

    bool is_circle() const { return A == B; }
    Conic outer() const { return member(0.0); }
    Conic member(double lambda) const;
    Point point_at(double t) const;
};

struct PonceletPair {
    Conic outer;
    Conic caustic;
    int m = 7;
    int winding = 1;
    double t0 = 0.0;
};

// Checks 1 <= q < m/2, gcd(q, m) = 1 and the minimum size.
void validate_winding(int m, int q, int min_m = 7);

// Both tangents from p to C; the first one is the counter-clockwise forward branch.
std::pair<Line, Line> tangent_lines_from_point(const Point& p, const Conic& c,
                                              const Tolerances& tol = Tolerances::defaults());

struct PonceletStep {
    Point point;
    Line line;
};

PonceletStep poncelet_step(const Point& p, const std::optional<Line>& incoming, const Conic& outer,
                           const Conic& caustic, const Tolerances& tol = Tolerances::defaults());

// Point of parameter t on an ellipse: centre + a cos t e1 + b sin t e2 (axis-aligned conics use x/y directly).
Point ellipse_point(const Conic& ellipse, double t);

double rotation_number(const ConfocalFamily& family, double lambda, int n = 10000,
                       const Tolerances& tol = Tolerances::defaults());

// Caustic parameter closing m-gons of winding q.
double solve_caustic(const ConfocalFamily& family, int m, int q, const Tolerances& tol = Tolerances::defaults());

// m steps from t0 without the closure check; residual stored on the ring.
PointRing trace_polygon(const Conic& outer, const Conic& caustic, int m, double t0,
                        const Tolerances& tol = Tolerances::defaults());
PointRing build_polygon(const PonceletPair& pair, const Tolerances& tol = Tolerances::defaults());

PonceletPair confocal_pair(const ConfocalFamily& family, double lambda, int m, int q, double t0);
// solve + build in one go
PointRing poncelet_polygon(const ConfocalFamily& family, int m, int q, double t0,
                           const Tolerances& tol = Tolerances::defaults());

// Regular m-gon on the circle of given radius, vertex j at angle phase + 2 pi q j / m.
PointRing regular_polygon(int m, double radius = 1.0, double phase = 0.0, int q = 1);

}  // namespace ponconf
