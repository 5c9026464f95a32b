#include "ponconf/projective.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace ponconf {

namespace {

Mat3<double> normalised(const Mat3<double>& m) {
    double f = frobenius(m);
    Mat3<double> r = m;
    if (f > 0)
        for (auto& row : r)
            for (double& x : row) x /= f;
    return r;
}

Eigen::Matrix3d to_eigen(const Mat3<double>& m) {
    Eigen::Matrix3d e;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e(i, j) = m[i][j];
    return e;
}

Mat3<double> from_eigen(const Eigen::Matrix3d& e) {
    Mat3<double> m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = e(i, j);
    return m;
}

std::array<double, 6> flatten(const Mat3<double>& m) {
    return {m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2]};
}

// quadratic monomials x^2, xy, xz, y^2, yz, z^2 with the cross terms doubled
std::array<double, 6> design_row(const Vec3<double>& p) {
    return {p[0] * p[0], 2 * p[0] * p[1], 2 * p[0] * p[2], p[1] * p[1], 2 * p[1] * p[2], p[2] * p[2]};
}

Mat3<double> unflatten(const Eigen::VectorXd& c) {
    return {{{c(0), c(1), c(2)}, {c(1), c(3), c(4)}, {c(2), c(4), c(5)}}};
}

// Two lines of a rank-2 degenerate conic, if real.
bool split_line_pair(const Mat3<double>& d, std::vector<Vec3<double>>& out) {
    Mat3<double> b = adjugate(d);
    int i = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(b[k][k]) > std::abs(b[i][i])) i = k;
    if (!(b[i][i] < 0)) return false;
    double beta = std::sqrt(-b[i][i]);
    Vec3<double> p{b[0][i] / beta, b[1][i] / beta, b[2][i] / beta};
    Mat3<double> c = d;
    // add the cross-product matrix of p; the result has rank one, g h^T
    c[0][1] += p[2];
    c[0][2] -= p[1];
    c[1][0] -= p[2];
    c[1][2] += p[0];
    c[2][0] += p[1];
    c[2][1] -= p[0];
    int bi = 0, bj = 0;
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s)
            if (std::abs(c[r][s]) > std::abs(c[bi][bj])) bi = r, bj = s;
    if (c[bi][bj] == 0) return false;
    out.push_back({c[bi][0], c[bi][1], c[bi][2]});
    out.push_back({c[0][bj], c[1][bj], c[2][bj]});
    return true;
}

}  // namespace

template <class T> BasicConic<T>::BasicConic(const Mat3<T>& m, ConicKind kind, const Tolerances& tol) : kind_(kind) {
    if constexpr (ScalarTraits<T>::exact) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (m[i][j] != m[j][i]) throw Error(ErrorCode::InvalidArgument, "conic matrix is not symmetric");
        m_ = m;
        degenerate_ = is_zero(det(m_));
    } else {
        Mat3<double> s;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s[i][j] = i == j ? m[i][j] : 0.5 * (m[i][j] + m[j][i]);
        if (frobenius(s) == 0) throw Error(ErrorCode::DegenerateConic, "zero conic matrix");
        m_ = normalised(s);
        degenerate_ = std::abs(det(m_)) < tol.degenerate_conic;
    }
}

template <class T> BasicConic<T> BasicConic<T>::from_normalised(const Mat3<T>& m, ConicKind kind, const Tolerances& tol) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (m[i][j] != m[j][i]) throw Error(ErrorCode::InvalidArgument, "conic matrix is not symmetric");
    BasicConic c;
    c.m_ = m;
    c.kind_ = kind;
    if constexpr (ScalarTraits<T>::exact) c.degenerate_ = is_zero(det(m));
    else {
        if (frobenius(m) == 0) throw Error(ErrorCode::DegenerateConic, "zero conic matrix");
        c.degenerate_ = std::abs(det(m)) < tol.degenerate_conic;
    }
    return c;
}

template <class T> BasicConic<T> BasicConic<T>::dual(const Tolerances& tol) const {
    if (degenerate_) throw Error(ErrorCode::DegenerateConic, "degenerate conic has no dual");
    return BasicConic<T>(adjugate(m_), kind_ == ConicKind::Point ? ConicKind::Dual : ConicKind::Point, tol);
}

template <class T> BasicTransform<T>::BasicTransform(const Mat3<T>& m) : m_(m), adj_(adjugate(m)) {
    if constexpr (ScalarTraits<T>::exact) {
        if (is_zero(det(m))) throw Error(ErrorCode::InvalidArgument, "singular transform");
    } else {
        double f = frobenius(m);
        if (f == 0 || std::abs(det(m)) < 1e-14 * f * f * f) throw Error(ErrorCode::InvalidArgument, "singular transform");
    }
}

template <class T> BasicConic<T> BasicTransform<T>::apply(const BasicConic<T>& c) const {
    if (c.kind() == ConicKind::Point) return BasicConic<T>(mul(transpose(adj_), mul(c.matrix(), adj_)), ConicKind::Point);
    return BasicConic<T>(mul(m_, mul(c.matrix(), transpose(m_))), ConicKind::Dual);
}

template <class T> bool same(const Vec3<T>& a, const Vec3<T>& b, const Tolerances& tol) {
    if constexpr (ScalarTraits<T>::exact) {
        return is_zero_vec(cross(a, b));
    } else {
        return projective_distance(a, b) < tol.degenerate;
    }
}

template <class T> BasicLine<T> join(const BasicPoint<T>& p, const BasicPoint<T>& q, const Tolerances& tol) {
    if (same(p.v(), q.v(), tol)) throw Error(ErrorCode::CoincidentPoints, "join of coincident points");
    return BasicLine<T>(cross(p.v(), q.v()));
}

template <class T> BasicPoint<T> meet(const BasicLine<T>& l, const BasicLine<T>& m, const Tolerances& tol) {
    if (same(l.v(), m.v(), tol)) throw Error(ErrorCode::CoincidentLines, "meet of coincident lines");
    return BasicPoint<T>(cross(l.v(), m.v()));
}

double conic_residual(const Conic& c, const Point& p) { return std::abs(quad_form(c.matrix(), p.v())); }

double dual_conic_residual(const Conic& dual, const Line& l) { return std::abs(quad_form(dual.matrix(), l.v())); }

template <class T> BasicLine<T> tangent_at(const BasicConic<T>& c, const BasicPoint<T>& p, const Tolerances& tol) {
    if (c.degenerate()) throw Error(ErrorCode::DegenerateConic, "tangent to a degenerate conic");
    if constexpr (ScalarTraits<T>::exact) {
        if (!is_zero(quad_form(c.matrix(), p.v()))) throw Error(ErrorCode::PointNotOnConic, "point is not on the conic");
    } else {
        if (conic_residual(c, p) > tol.incidence) throw Error(ErrorCode::PointNotOnConic, "point is not on the conic");
    }
    return BasicLine<T>(mul(c.matrix(), p.v()));
}

Point pole(const Conic& c, const Line& l) { return Point(mul(adjugate(c.matrix()), l.v())); }

Conic fit_conic(const std::vector<Point>& pts, const Tolerances& tol) {
    if (pts.size() < 5) throw Error(ErrorCode::DegeneratePointSet, "need at least five points");
    Eigen::MatrixXd a(pts.size(), 6);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto row = design_row(pts[i].v());
        for (int j = 0; j < 6; ++j) a(static_cast<Eigen::Index>(i), j) = row[j];
    }
    // pad to a square system so the full V is available
    Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(std::max<Eigen::Index>(a.rows(), 6), 6);
    sq.topRows(a.rows()) = a;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sq, Eigen::ComputeFullV);
    auto sv = svd.singularValues();
    if (sv(4) <= tol.rank_cutoff * sv(0))
        throw Error(ErrorCode::DegeneratePointSet, "points do not determine a unique conic");
    return Conic(unflatten(svd.matrixV().col(5)), ConicKind::Point, tol);
}

Conic conic_through_five_points(const std::vector<Point>& pts, const Tolerances& tol) {
    if (pts.size() != 5) throw Error(ErrorCode::InvalidArgument, "conic_through_five_points needs exactly five points");
    return fit_conic(pts, tol);
}

std::pair<Point, Point> line_conic_intersection(const Conic& c, const Line& l, const Tolerances& tol) {
    if (c.degenerate()) throw Error(ErrorCode::DegenerateConic, "intersection with a degenerate conic");
    // orthonormal basis q1, q2 of the plane of l
    Eigen::Vector3d n(l[0], l[1], l[2]);
    Eigen::Vector3d e = std::abs(n(0)) < 0.6 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    Eigen::Vector3d q1 = n.cross(e).normalized();
    Eigen::Vector3d q2 = n.cross(q1).normalized();
    Vec3<double> u{q1(0), q1(1), q1(2)}, w{q2(0), q2(1), q2(2)};
    const auto& m = c.matrix();
    double a = quad_form(m, u), b = dot(u, mul(m, w)), cc = quad_form(m, w);
    double disc = b * b - a * cc;
    double mag = b * b + std::abs(a * cc);
    if (disc < 0) {
        if (disc < -tol.incidence * mag) throw Error(ErrorCode::ComplexIntersection, "line misses the conic");
        disc = 0;
    }
    double r = -b - std::copysign(std::sqrt(disc), b);
    Vec3<double> p1, p2;
    if (r == 0) {
        // b = 0 and disc = 0: tangency with a * c = 0
        p1 = p2 = std::abs(a) > std::abs(cc) ? w : u;
    } else {
        p1 = scale(u, r) + scale(w, a);
        p2 = scale(u, cc) + scale(w, r);
    }
    if (norm(p1) == 0) p1 = p2;
    if (norm(p2) == 0) p2 = p1;
    return {Point(p1), Point(p2)};
}

std::vector<double> dependence_spectrum(const std::vector<Conic>& conics, DependenceMode mode) {
    Eigen::MatrixXd a(std::max<std::size_t>(conics.size(), 6), 6);
    a.setZero();
    for (std::size_t i = 0; i < conics.size(); ++i) {
        if (mode == DependenceMode::Inverse && conics[i].degenerate())
            throw Error(ErrorCode::DegenerateConic, "inverse dependence needs non-degenerate conics");
        Mat3<double> m = mode == DependenceMode::Inverse ? normalised(adjugate(conics[i].matrix())) : conics[i].matrix();
        auto f = flatten(m);
        for (int j = 0; j < 6; ++j) a(static_cast<Eigen::Index>(i), j) = f[j];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    std::vector<double> out;
    for (std::size_t i = 0; i < std::min<std::size_t>(conics.size(), 6); ++i) out.push_back(svd.singularValues()(static_cast<Eigen::Index>(i)));
    return out;
}

int dependence_rank(const std::vector<Conic>& conics, DependenceMode mode, const Tolerances& tol) {
    auto sv = dependence_spectrum(conics, mode);
    if (sv.empty() || sv[0] == 0) return 0;
    return static_cast<int>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > tol.rank_cutoff * sv[0]; }));
}

int dependence_rank(const std::vector<ExactConic>& conics, DependenceMode mode) {
    std::vector<std::array<Rational, 6>> rows;
    for (const auto& c : conics) {
        if (mode == DependenceMode::Inverse && c.degenerate())
            throw Error(ErrorCode::DegenerateConic, "inverse dependence needs non-degenerate conics");
        Mat3<Rational> m = mode == DependenceMode::Inverse ? adjugate(c.matrix()) : c.matrix();
        rows.push_back({m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2]});
    }
    int rank = 0;
    for (int col = 0; col < 6 && rank < static_cast<int>(rows.size()); ++col) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (sgn(rows[r][col]) != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
            if (sgn(rows[r][col]) == 0) continue;
            Rational f = rows[r][col] / rows[rank][col];
            for (int j = col; j < 6; ++j) rows[r][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

ProjectiveTransform fit_homography(const std::vector<Point>& src, const std::vector<Point>& dst) {
    if (src.size() != dst.size() || src.size() < 4)
        throw Error(ErrorCode::InvalidArgument, "homography needs at least four correspondences");
    const auto n = static_cast<Eigen::Index>(src.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(std::max<Eigen::Index>(3 * n, 9), 9);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& x = src[i].v();
        const auto& y = dst[i].v();
        // y cross (H x) = 0, three rows (one redundant)
        for (int k = 0; k < 3; ++k) {
            int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
            for (int j = 0; j < 3; ++j) {
                a(3 * i + k, 3 * k2 + j) += y[k1] * x[j];
                a(3 * i + k, 3 * k1 + j) -= y[k2] * x[j];
            }
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    Eigen::VectorXd h = svd.matrixV().col(8);
    Mat3<double> m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = h(3 * i + j);
    double f = frobenius(m);
    for (auto& row : m)
        for (double& x : row) x /= f;
    return ProjectiveTransform(m);
}

Point conic_center(const Conic& c) { return Point(mul(adjugate(c.matrix()), Vec3<double>{0, 0, 1})); }

bool is_ellipse(const Conic& c) {
    const auto& m = c.matrix();
    double d2 = m[0][0] * m[1][1] - m[0][1] * m[0][1];
    if (!(d2 > 0)) return false;
    double s = m[0][0] > 0 ? 1.0 : -1.0;
    return s * det(m) < 0;
}

ProjectiveTransform simultaneous_diagonalization(const Conic& a, const Conic& b, const Tolerances& tol) {
    if (a.degenerate() || b.degenerate()) throw Error(ErrorCode::DegenerateConic, "diagonalisation of degenerate conic");
    const auto& ma = a.matrix();
    const auto& mb = b.matrix();
    {
        Mat3<double> dm, sm;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) dm[i][j] = ma[i][j] - mb[i][j], sm[i][j] = ma[i][j] + mb[i][j];
        if (std::min(frobenius(dm), frobenius(sm)) < 1e-12)
            throw Error(ErrorCode::NotGenericPosition, "conics coincide");
    }
    // degenerate members A - mu B of the pencil
    Eigen::Matrix3d ea = to_eigen(ma), eb = to_eigen(mb);
    Eigen::EigenSolver<Eigen::Matrix3d> es(eb.inverse() * ea);
    std::vector<Vec3<double>> found;
    auto add_point = [&](const Point& p) {
        for (const auto& q : found)
            if (projective_distance(q, p.v()) < 1e-7) return;
        found.push_back(p.v());
    };
    for (int k = 0; k < 3; ++k) {
        auto mu = es.eigenvalues()(k);
        if (std::abs(mu.imag()) > 1e-9 * (1 + std::abs(mu.real()))) continue;
        Mat3<double> d;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) d[i][j] = ma[i][j] - mu.real() * mb[i][j];
        d = normalised(d);
        std::vector<Vec3<double>> lines;
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(to_eigen(d), Eigen::ComputeFullU);
        if (svd.singularValues()(1) < 1e-9) {
            // double line
            auto u = svd.matrixU().col(0);
            lines.push_back({u(0), u(1), u(2)});
        } else if (!split_line_pair(d, lines)) {
            continue;
        }
        for (const auto& l : lines) {
            try {
                auto [p, q] = line_conic_intersection(a, Line(l), tol);
                add_point(p);
                add_point(q);
            } catch (const Error&) {
            }
        }
    }
    if (found.empty()) throw Error(ErrorCode::NotGenericPosition, "conics have no real intersection");
    if (found.size() == 4) {
        std::vector<Point> src, dst;
        const double sq[4][2] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
        for (int i = 0; i < 4; ++i) {
            src.emplace_back(found[i]);
            dst.emplace_back(sq[i][0], sq[i][1], 1.0);
        }
        return fit_homography(src, dst);
    }
    // Tangential contact: fall back to a real eigenbasis of B^-1 A, made B-orthogonal inside repeated eigenvalues.
    for (int k = 0; k < 3; ++k)
        if (std::abs(es.eigenvalues()(k).imag()) > 1e-9) throw Error(ErrorCode::NotGenericPosition, "complex pencil");
    Eigen::Matrix3d v = es.eigenvectors().real();
    Eigen::Vector3d mu = es.eigenvalues().real();
    std::vector<int> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return mu(i) < mu(j); });
    Eigen::Matrix3d basis;
    for (int i = 0; i < 3; ++i) basis.col(i) = v.col(order[i]);
    for (int i = 0; i + 1 < 3; ++i) {
        if (std::abs(mu(order[i]) - mu(order[i + 1])) > 1e-9 * (1 + std::abs(mu(order[i])))) continue;
        Eigen::Matrix<double, 3, 2> sub;
        sub << basis.col(i), basis.col(i + 1);
        Eigen::Matrix2d g = sub.transpose() * eb * sub;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> s2(g);
        Eigen::Matrix<double, 3, 2> rot = sub * s2.eigenvectors();
        basis.col(i) = rot.col(0);
        basis.col(i + 1) = rot.col(1);
    }
    Eigen::Matrix3d t = basis.inverse();
    for (const Eigen::Matrix3d& m : {ea, eb}) {
        Eigen::Matrix3d img = basis.transpose() * m * basis;
        double off = std::abs(img(0, 1)) + std::abs(img(0, 2)) + std::abs(img(1, 2));
        if (off > 1e-9 * img.norm()) throw Error(ErrorCode::NotGenericPosition, "pencil is not diagonalisable over the reals");
    }
    return ProjectiveTransform(from_eigen(t));
}

template class BasicConic<double>;
template class BasicConic<Rational>;
template class BasicTransform<double>;
template class BasicTransform<Rational>;
template bool same(const Vec3<double>&, const Vec3<double>&, const Tolerances&);
template bool same(const Vec3<Rational>&, const Vec3<Rational>&, const Tolerances&);
template Line join(const Point&, const Point&, const Tolerances&);
template ExactLine join(const ExactPoint&, const ExactPoint&, const Tolerances&);
template Point meet(const Line&, const Line&, const Tolerances&);
template ExactPoint meet(const ExactLine&, const ExactLine&, const Tolerances&);
template Line tangent_at(const Conic&, const Point&, const Tolerances&);
template ExactLine tangent_at(const ExactConic&, const ExactPoint&, const Tolerances&);

}  // namespace ponconf
