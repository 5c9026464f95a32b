#include "ponconf/incircle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <json.hpp>

#include "ponconf/audit.hpp"

namespace ponconf {

namespace {

int ring_index_for(int k, int m) {
    int r = static_cast<int>(wrap_index(k, m));
    return std::min(r, m - r);
}

Mat3<double> confocal_matrix(const ConfocalFamily& f, double lambda) {
    return diag(1.0 / (f.A - lambda), 1.0 / (f.B - lambda), -1.0);
}

}  // namespace

OrientedLine orient(const Line& l, const Tolerances& tol) {
    double h = std::hypot(l[0], l[1]);
    if (h == 0) throw Error(ErrorCode::LineThroughCenter, "line at infinity has no orientation");
    Vec3<double> v{l[0] / h, l[1] / h, l[2] / h};
    if (std::abs(v[2]) < tol.degenerate) throw Error(ErrorCode::LineThroughCenter, "line passes through the centre");
    if (v[2] < 0) v = scale(v, -1.0);
    return {v};
}

std::vector<OrientedLine> orient_ring(const LineRing& ring, const Tolerances& tol) {
    std::vector<OrientedLine> out;
    for (const auto& l : ring.elements) out.push_back(orient(l, tol));
    return out;
}

SquareCell square_cell(const std::vector<OrientedLine>& ring, long a, int k, int l) {
    const long m = static_cast<long>(ring.size());
    if (k == l || wrap_index(k, m) == 0 || wrap_index(l, m) == 0)
        throw Error(ErrorCode::InvalidArgument, "square cell needs distinct nonzero shifts");
    SquareCell c = labelled_cell(ring, a, a + l, a + k, a + k + l);
    c.base = wrap_index(a, m);
    c.k = k;
    c.l = l;
    return c;
}

SquareCell labelled_cell(const std::vector<OrientedLine>& ring, long a, long b, long c, long d) {
    const long m = static_cast<long>(ring.size());
    SquareCell cell;
    cell.base = wrap_index(a, m);
    cell.k = static_cast<int>(wrap_index(c - a, m));
    cell.l = static_cast<int>(wrap_index(b - a, m));
    cell.index = {wrap_index(a, m), wrap_index(b, m), wrap_index(d, m), wrap_index(c, m)};
    for (int i = 0; i < 4; ++i) cell.lines[static_cast<std::size_t>(i)] = ring[static_cast<std::size_t>(cell.index[static_cast<std::size_t>(i)])];
    cell.signs = {1, -1, 1, -1};
    return cell;
}

bool Incircle::signs_match(const SquareCell& cell) const {
    for (int i = 0; i < 4; ++i)
        if (signed_distances[static_cast<std::size_t>(i)] * cell.signs[static_cast<std::size_t>(i)] <= 0) return false;
    return true;
}

Incircle incircle(const SquareCell& cell, const Tolerances& tol) {
    Eigen::Matrix<double, 4, 3> a;
    Eigen::Vector4d rhs;
    for (int i = 0; i < 4; ++i) {
        const auto& v = cell.lines[static_cast<std::size_t>(i)].coords;
        a(i, 0) = v[0];
        a(i, 1) = v[1];
        a(i, 2) = -cell.signs[static_cast<std::size_t>(i)];
        rhs(i) = -v[2];
    }
    Eigen::Vector3d x = a.colPivHouseholderQr().solve(rhs);
    Incircle out;
    out.cx = x(0);
    out.cy = x(1);
    out.sheet = x(2) < 0 ? -1 : 1;
    out.radius = std::abs(x(2));
    out.center = Point(x(0), x(1), 1.0);
    Eigen::Vector4d r = a * x - rhs;
    out.residual = r.cwiseAbs().maxCoeff();
    for (int i = 0; i < 4; ++i)
        out.signed_distances[static_cast<std::size_t>(i)] = out.sheet * cell.lines[static_cast<std::size_t>(i)].signed_distance(x(0), x(1));
    if (!(out.residual < tol.incircle) || !(out.radius > tol.degenerate))
        throw Error(ErrorCode::NoIncircle, "no circle touches the four cell lines (residual " + std::to_string(out.residual) +
                                               ", radius " + std::to_string(out.radius) + ")");
    return out;
}

Point incircle_center_via_tangents(const SquareCell& cell, const Grid& grid, const Tolerances& tol) {
    const long m = grid.edges.m();
    const int kk = ring_index_for(cell.k, static_cast<int>(m));
    if (kk < 1 || kk >= static_cast<int>(grid.conics.size()))
        throw Error(ErrorCode::InvalidArgument, "cell shift has no grid conic");
    const Conic& c = grid.conics[static_cast<std::size_t>(kk)];
    // corners l_a ^ l_{a+k} and l_{a+l} ^ l_{a+k+l}
    const long a = cell.base;
    Point p = meet(grid.edges[a], grid.edges[a + cell.k], tol);
    Point q = meet(grid.edges[a + cell.l], grid.edges[a + cell.k + cell.l], tol);
    Line tp(mul(c.matrix(), p.v())), tq(mul(c.matrix(), q.v()));
    return meet(tp, tq, tol);
}

double collinearity_residual(const std::vector<Point>& pts) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(std::max<std::size_t>(pts.size(), 3)), 3);
    a.setZero();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (int j = 0; j < 3; ++j) a(static_cast<Eigen::Index>(i), j) = pts[i][static_cast<std::size_t>(j)];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    Eigen::Vector3d l = svd.matrixV().col(2);
    double worst = 0;
    for (const auto& p : pts) worst = std::max(worst, std::abs(l(0) * p[0] + l(1) * p[1] + l(2) * p[2]));
    return worst;
}

Scene centers_scene(const LineRing& edges, int a, int b, int c, const Tolerances& tol) {
    const long m = edges.m();
    for (int x : {a, b, c})
        if (x < 1 || 2 * x >= m) throw Error(ErrorCode::InvalidArgument, "centre shifts must lie in [1, m/2)");
    if (a == b || b == c || a == c) throw Error(ErrorCode::InvalidArgument, "centre shifts must be distinct");
    auto ring = orient_ring(edges, tol);

    Scene scene;
    scene.m = static_cast<int>(m);
    const std::array<std::pair<int, int>, 3> types{{{a, b}, {b, c}, {c, a}}};
    for (auto [x, y] : types) {
        PointRing centers;
        centers.label = "O" + std::to_string(x) + "-" + std::to_string(y);
        centers.drift2 = edges.drift2 + x + y;
        centers.trail = edges.trail;
        centers.trail.push_back({"incircle", x, edges.label});
        centers.trail.push_back({"incircle", y, edges.label});
        for (long i = 0; i < m; ++i) {
            try {
                centers.elements.push_back(incircle(square_cell(ring, i, x, y), tol).center);
            } catch (const Error& e) {
                throw e.with_step(centers.label + "[" + std::to_string(i) + "]");
            }
        }
        scene.point_rings.push_back(std::move(centers));
    }
    std::map<int, int> lid;
    for (int x : {a, b, c}) {
        LineRing bis;
        bis.label = "B" + std::to_string(x);
        bis.shift = x;
        bis.drift2 = edges.drift2 + x;
        bis.trail = edges.trail;
        bis.trail.push_back({"bisect", x, edges.label});
        for (long j = 0; j < m; ++j) {
            const auto& u = ring[static_cast<std::size_t>(j)].coords;
            const auto& v = ring[static_cast<std::size_t>(wrap_index(j + x, m))].coords;
            bis.elements.emplace_back(u + v);
        }
        scene.line_rings.push_back(std::move(bis));
    }
    IncidenceAuditor auditor(4, tol);
    std::vector<int> pid;
    for (const auto& r : scene.point_rings) pid.push_back(auditor.add_points(r));
    for (std::size_t i = 0; i < scene.line_rings.size(); ++i) lid[std::array{a, b, c}[i]] = auditor.add_lines(scene.line_rings[i]);
    auto line_drift = [&](int x) { return edges.drift2 + x; };
    for (std::size_t i = 0; i < types.size(); ++i) {
        auto [x, y] = types[i];
        auditor.expect(pid[i], scene.point_rings[i].drift2, lid[x], line_drift(x), y);
        auditor.expect(pid[i], scene.point_rings[i].drift2, lid[y], line_drift(y), x);
    }
    scene.audit = auditor.run();

    // four centres tangent to lines i and i+a are collinear
    const auto& oab = scene.point_rings[0];
    const auto& oca = scene.point_rings[2];
    double col = 0;
    for (long i = 0; i < m; ++i) col = std::max(col, collinearity_residual({oab[i], oab[i - b], oca[i], oca[i - c]}));
    scene.closure_residual = col;
    nlohmann::json ext = {{"collinearity_residual", col}};
    scene.extensions["incircles"] = ext.dump();
    return scene;
}

std::pair<double, double> confocal_parameters(const ConfocalFamily& f, const Point& p) {
    if (p[2] == 0) throw Error(ErrorCode::InvalidArgument, "point at infinity");
    double x = p[0] / p[2], y = p[1] / p[2];
    // (A - l)(B - l) - x^2 (B - l) - y^2 (A - l) = 0
    double bq = -(f.A + f.B - x * x - y * y);
    double cq = f.A * f.B - x * x * f.B - y * y * f.A;
    double disc = std::sqrt(std::max(0.0, bq * bq - 4 * cq));
    double r1 = (-bq - disc) / 2, r2 = (-bq + disc) / 2;
    return {r1, r2};
}

FlawedCgtReport flawed_cgt_check(const ConfocalFamily& family, const LineRing& edges, const Grid& grid, int k, int l,
                                 const Tolerances& tol) {
    const long m = edges.m();
    auto ring = orient_ring(edges, tol);
    const int kk = ring_index_for(k, static_cast<int>(m));
    const Conic& gc = grid.conics.at(static_cast<std::size_t>(kk));
    for (long a = 0; a < m; ++a) {
        Point p = meet(edges[a], edges[a + k], tol);
        Point q = meet(edges[a + l], edges[a + k + l], tol);
        double px = p[0] / p[2], py = p[1] / p[2], qx = q[0] / q[2], qy = q[1] / q[2];
        if (std::abs(px + qx) > 1e-9 * (1 + std::abs(px)) || std::abs(py - qy) > 1e-9 * (1 + std::abs(py))) continue;

        SquareCell cell = square_cell(ring, a, k, l);
        Incircle ic = incircle(cell, tol);
        auto [l1, l2] = confocal_parameters(family, p);
        FlawedCgtReport rep;
        rep.base = a;
        rep.p = p;
        rep.q = q;
        // the grid conic is whichever family member matches the fitted C_k
        Conic c1(confocal_matrix(family, l1)), c2(confocal_matrix(family, l2));
        auto mdist = [&](const Conic& x) {
            double s = 0, t = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    s += std::pow(x.matrix()[i][j] - gc.matrix()[i][j], 2);
                    t += std::pow(x.matrix()[i][j] + gc.matrix()[i][j], 2);
                }
            return std::sqrt(std::min(s, t));
        };
        bool first = mdist(c1) < mdist(c2);
        rep.lambda_grid = first ? l1 : l2;
        rep.lambda_other = first ? l2 : l1;
        const Conic& g = first ? c1 : c2;
        const Conic& o = first ? c2 : c1;
        rep.other_through_q = conic_residual(o, q);
        auto tangent_meet = [&](const Conic& c) {
            return meet(Line(mul(c.matrix(), p.v())), Line(mul(c.matrix(), q.v())), tol);
        };
        rep.grid_center_distance = distance(tangent_meet(g), ic.center);
        rep.other_center_distance = distance(tangent_meet(o), ic.center);
        return rep;
    }
    throw Error(ErrorCode::InvalidArgument, "no mirror-symmetric cell of this type (base point must sit on the minor axis)");
}

}  // namespace ponconf
