#include "ponconf/poncelet.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

namespace ponconf {

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;

double polar_angle(const Point& p, const Point& c) {
    return std::atan2(p[1] / p[2] - c[1] / c[2], p[0] / p[2] - c[0] / c[2]);
}

double ccw_increment(double from, double to) {
    double d = std::fmod(to - from, kTwoPi);
    if (d < 0) d += kTwoPi;
    return d;
}

struct Walk {
    double angle = 0;  // accumulated counter-clockwise angle
    double residual = 0;
};

Walk walk(const Conic& outer, const Conic& caustic, const Point& start, int steps, const Tolerances& tol) {
    Point c = conic_center(outer);
    Point p = start;
    std::optional<Line> in;
    Walk w;
    for (int i = 0; i < steps; ++i) {
        auto s = poncelet_step(p, in, outer, caustic, tol);
        w.angle += ccw_increment(polar_angle(p, c), polar_angle(s.point, c));
        p = s.point;
        in = s.line;
    }
    w.residual = distance(p, start);
    return w;
}
}  // namespace

ConfocalFamily::ConfocalFamily(double a2, double b2) : A(a2), B(b2) {
    if (!(B > 0) || !(A >= B) || !std::isfinite(A))
        throw Error(ErrorCode::InvalidArgument, "confocal family needs A >= B > 0");
}

Conic ConfocalFamily::member(double lambda) const {
    if (!(lambda < B)) throw Error(ErrorCode::InvalidArgument, "confocal parameter must stay below B");
    return Conic(diag(1.0 / (A - lambda), 1.0 / (B - lambda), -1.0));
}

Point ConfocalFamily::point_at(double t) const { return Point(std::sqrt(A) * std::cos(t), std::sqrt(B) * std::sin(t), 1.0); }

void validate_winding(int m, int q, int min_m) {
    if (m < min_m) throw Error(ErrorCode::InvalidArgument, "polygon size " + std::to_string(m) + " below " + std::to_string(min_m));
    if (q < 1 || 2 * q >= m) throw Error(ErrorCode::InvalidArgument, "winding must satisfy 1 <= q < m/2");
    if (std::gcd(m, q) != 1) throw Error(ErrorCode::InvalidArgument, "winding must be coprime to m");
}

std::pair<Line, Line> tangent_lines_from_point(const Point& p, const Conic& c, const Tolerances& tol) {
    if (c.degenerate()) throw Error(ErrorCode::DegenerateConic, "tangents to a degenerate conic");
    if (conic_residual(c, p) < tol.incidence) throw Error(ErrorCode::PointOnConic, "point lies on the conic");
    // lines through p: alpha n1 + beta n2 with n1, n2 spanning p-perp; tangency is l^T adj(C) l = 0
    Eigen::Vector3d pv(p[0], p[1], p[2]);
    Eigen::Vector3d e = std::abs(pv(0)) < 0.6 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    Eigen::Vector3d n1 = pv.cross(e).normalized();
    Eigen::Vector3d n2 = pv.cross(n1).normalized();
    Vec3<double> u{n1(0), n1(1), n1(2)}, w{n2(0), n2(1), n2(2)};
    Mat3<double> d = adjugate(c.matrix());
    double a = quad_form(d, u), b = dot(u, mul(d, w)), cc = quad_form(d, w);
    double disc = b * b - a * cc;
    if (disc <= 0) throw Error(ErrorCode::PointInsideConic, "no real tangent from an interior point");
    double r = -b - std::copysign(std::sqrt(disc), b);
    Line l1(scale(u, r) + scale(w, a));
    Line l2(scale(u, cc) + scale(w, r));
    Point center = conic_center(c);
    Point t1(mul(d, l1.v()));
    if (signed_area(center.v(), p.v(), t1.v()) < 0) std::swap(l1, l2);
    return {l1, l2};
}

PonceletStep poncelet_step(const Point& p, const std::optional<Line>& incoming, const Conic& outer,
                           const Conic& caustic, const Tolerances& tol) {
    auto [fwd, back] = tangent_lines_from_point(p, caustic, tol);
    Line line = fwd;
    if (incoming && distance(fwd, *incoming) < distance(back, *incoming)) line = back;
    auto [q1, q2] = line_conic_intersection(outer, line, tol);
    Point next = distance(q1, p) >= distance(q2, p) ? q1 : q2;
    return {next, line};
}

Point ellipse_point(const Conic& ellipse, double t) {
    const auto& m = ellipse.matrix();
    if (m[0][1] == 0 && m[0][2] == 0 && m[1][2] == 0) {
        double s = -m[2][2];
        return Point(std::cos(t) / std::sqrt(m[0][0] / s), std::sin(t) / std::sqrt(m[1][1] / s), 1.0);
    }
    Point c = conic_center(ellipse);
    double cx = c[0] / c[2], cy = c[1] / c[2];
    // value of the form at the centre fixes the scale of the 2x2 block
    double k = -(quad_form(m, Vec3<double>{cx, cy, 1.0}));
    Eigen::Matrix2d q;
    q << m[0][0] / k, m[0][1] / k, m[0][1] / k, m[1][1] / k;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q);
    Eigen::Vector2d e1 = es.eigenvectors().col(0), e2 = es.eigenvectors().col(1);
    if (e1(0) < 0) e1 = -e1;
    if (e1(0) * e2(1) - e1(1) * e2(0) < 0) e2 = -e2;
    double a = 1 / std::sqrt(es.eigenvalues()(0)), b = 1 / std::sqrt(es.eigenvalues()(1));
    Eigen::Vector2d x = Eigen::Vector2d(cx, cy) + a * std::cos(t) * e1 + b * std::sin(t) * e2;
    return Point(x(0), x(1), 1.0);
}

double rotation_number(const ConfocalFamily& family, double lambda, int n, const Tolerances& tol) {
    if (n < 1000) throw Error(ErrorCode::InvalidArgument, "rotation number needs at least 1000 steps");
    if (!(lambda > 0) || !(lambda < family.B)) throw Error(ErrorCode::InvalidArgument, "lambda outside (0, B)");
    Walk w = walk(family.outer(), family.member(lambda), family.point_at(0.0), n, tol);
    return w.angle / (kTwoPi * n);
}

double solve_caustic(const ConfocalFamily& family, int m, int q, const Tolerances& tol) {
    validate_winding(m, q);
    const double target = static_cast<double>(q) / m;
    const Conic outer = family.outer();
    const Point start = family.point_at(0.0);
    auto f = [&](double lambda) { return walk(outer, family.member(lambda), start, m, tol).angle - kTwoPi * q; };

    double lo = 0.0, hi = family.B;
    // coarse phase: rotation-number estimate
    for (int i = 0; i < 12; ++i) {
        double mid = 0.5 * (lo + hi);
        if (rotation_number(family, mid, 1000, tol) < target) lo = mid;
        else hi = mid;
    }
    // re-bracket with the exact closure oracle, widening as needed to absorb estimator bias
    double centre = 0.5 * (lo + hi);
    double width = std::max(hi - lo, 1e-6 * family.B);
    const double floor_l = 1e-14 * family.B, ceil_l = family.B * (1 - 1e-12);
    double a = centre, b = centre;
    for (int i = 0;; ++i) {
        a = std::max(floor_l, centre - width);
        b = std::min(ceil_l, centre + width);
        if (f(a) < 0 && f(b) > 0) break;
        if (a == floor_l && b == ceil_l) {
            throw Error(ErrorCode::RotationNumberOutOfRange,
                        "rotation number " + std::to_string(q) + "/" + std::to_string(m) + " not attained by the family");
        }
        width *= 4;
        if (i > 60) throw Error(ErrorCode::NoConvergence, "could not bracket the closing caustic");
    }
    // fine phase: bisection on the accumulated angle after m steps
    for (int it = 0; it < 200; ++it) {
        if (b - a < 1e-12) {
            double lambda = 0.5 * (a + b);
            double res = walk(outer, family.member(lambda), start, m, tol).residual;
            if (res < 1e-9) return lambda;
            throw Error(ErrorCode::NoConvergence, "closure residual " + std::to_string(res) + " after bisection");
        }
        double mid = 0.5 * (a + b);
        if (f(mid) < 0) a = mid;
        else b = mid;
    }
    throw Error(ErrorCode::NoConvergence, "bisection did not converge in 200 steps");
}

PointRing trace_polygon(const Conic& outer, const Conic& caustic, int m, double t0, const Tolerances& tol) {
    PointRing ring;
    ring.label = "P0";
    ring.trail.push_back({"seed", 0, "poncelet"});
    Point p = ellipse_point(outer, t0);
    Point start = p;
    std::optional<Line> in;
    for (int i = 0; i < m; ++i) {
        ring.elements.push_back(p);
        auto s = poncelet_step(p, in, outer, caustic, tol);
        p = s.point;
        in = s.line;
    }
    ring.closure_residual = distance(p, start);
    return ring;
}

PointRing build_polygon(const PonceletPair& pair, const Tolerances& tol) {
    validate_winding(pair.m, pair.winding);
    PointRing ring = trace_polygon(pair.outer, pair.caustic, pair.m, pair.t0, tol);
    if (*ring.closure_residual > tol.closure)
        throw Error(ErrorCode::ClosureFailure,
                    "polygon does not close: residual " + std::to_string(*ring.closure_residual), "P0");
    return ring;
}

PonceletPair confocal_pair(const ConfocalFamily& family, double lambda, int m, int q, double t0) {
    return {family.outer(), family.member(lambda), m, q, t0};
}

PointRing poncelet_polygon(const ConfocalFamily& family, int m, int q, double t0, const Tolerances& tol) {
    double lambda = solve_caustic(family, m, q, tol);
    return build_polygon(confocal_pair(family, lambda, m, q, t0), tol);
}

PointRing regular_polygon(int m, double radius, double phase, int q) {
    PointRing ring;
    ring.label = "P0";
    ring.trail.push_back({"seed", 0, "regular"});
    for (int j = 0; j < m; ++j) {
        double t = phase + kTwoPi * q * j / m;
        ring.elements.emplace_back(radius * std::cos(t), radius * std::sin(t), 1.0);
    }
    ring.closure_residual = 0.0;
    return ring;
}

}  // namespace ponconf
