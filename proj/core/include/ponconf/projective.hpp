#pragma once

#include <utility>
#include <vector>

#include "ponconf/error.hpp"
#include "ponconf/linalg.hpp"
#include "ponconf/tolerances.hpp"

namespace ponconf {

namespace detail {
template <class T, class Tag> class Homogeneous {
public:
    Homogeneous() : v_{T(0), T(0), T(1)} {}
    explicit Homogeneous(const Vec3<T>& v) : v_(canonical(v)) {
        if (is_zero_vec(v_)) throw Error(ErrorCode::InvalidArgument, "zero vector is not a projective element");
    }
    Homogeneous(T x, T y, T z) : Homogeneous(Vec3<T>{x, y, z}) {}
    // trusted representative, stored bit-for-bit (deserialisation)
    static Homogeneous from_canonical(const Vec3<T>& v) {
        if (is_zero_vec(v)) throw Error(ErrorCode::InvalidArgument, "zero vector is not a projective element");
        Homogeneous h;
        h.v_ = v;
        return h;
    }

    const Vec3<T>& v() const { return v_; }
    const T& operator[](std::size_t i) const { return v_[i]; }

    // representative equality; projective equality for floats goes through same_*()
    bool operator==(const Homogeneous& o) const { return v_ == o.v_; }

private:
    Vec3<T> v_;
};
struct PointTag {};
struct LineTag {};
}  // namespace detail

template <class T> using BasicPoint = detail::Homogeneous<T, detail::PointTag>;
template <class T> using BasicLine = detail::Homogeneous<T, detail::LineTag>;

using Point = BasicPoint<double>;
using Line = BasicLine<double>;
using ExactPoint = BasicPoint<Rational>;
using ExactLine = BasicLine<Rational>;

enum class ConicKind { Point, Dual };

template <class T> class BasicConic {
public:
    BasicConic() = default;
    // Float input is symmetrised and scaled to unit Frobenius norm; exact input must be symmetric.
    explicit BasicConic(const Mat3<T>& m, ConicKind kind = ConicKind::Point,
                        const Tolerances& tol = Tolerances::defaults());

    // stored matrix taken as-is (already symmetric and normalised)
    static BasicConic from_normalised(const Mat3<T>& m, ConicKind kind = ConicKind::Point,
                                      const Tolerances& tol = Tolerances::defaults());

    const Mat3<T>& matrix() const { return m_; }
    ConicKind kind() const { return kind_; }
    bool operator==(const BasicConic&) const = default;
    bool degenerate() const { return degenerate_; }

    // point conic <-> dual conic via adjugate
    BasicConic dual(const Tolerances& tol = Tolerances::defaults()) const;

private:
    Mat3<T> m_ = zero_mat<T>();
    ConicKind kind_ = ConicKind::Point;
    bool degenerate_ = true;
};

using Conic = BasicConic<double>;
using ExactConic = BasicConic<Rational>;

template <class T> class BasicTransform {
public:
    explicit BasicTransform(const Mat3<T>& m);
    static BasicTransform identity() { return BasicTransform(identity3<T>()); }

    const Mat3<T>& matrix() const { return m_; }
    BasicPoint<T> apply(const BasicPoint<T>& p) const { return BasicPoint<T>(mul(m_, p.v())); }
    // lines by the inverse transpose; adjugate transpose is the same up to scale
    BasicLine<T> apply(const BasicLine<T>& l) const { return BasicLine<T>(mul(transpose(adj_), l.v())); }
    BasicConic<T> apply(const BasicConic<T>& c) const;
    BasicTransform compose(const BasicTransform& inner) const { return BasicTransform(mul(m_, inner.m_)); }
    BasicTransform inverse() const { return BasicTransform(adj_); }

private:
    Mat3<T> m_;
    Mat3<T> adj_;
};

using ProjectiveTransform = BasicTransform<double>;
using ExactTransform = BasicTransform<Rational>;

// --- incidence primitives -------------------------------------------------

template <class T> bool same(const Vec3<T>& a, const Vec3<T>& b, const Tolerances& tol);

template <class T>
BasicLine<T> join(const BasicPoint<T>& p, const BasicPoint<T>& q, const Tolerances& tol = Tolerances::defaults());
template <class T>
BasicPoint<T> meet(const BasicLine<T>& l, const BasicLine<T>& m, const Tolerances& tol = Tolerances::defaults());

template <class T> T incidence_value(const BasicPoint<T>& p, const BasicLine<T>& l) { return dot(p.v(), l.v()); }
inline double incidence_residual(const Point& p, const Line& l) { return incidence_residual(p.v(), l.v()); }
inline double distance(const Point& p, const Point& q) { return projective_distance(p.v(), q.v()); }
inline double distance(const Line& p, const Line& q) { return projective_distance(p.v(), q.v()); }

// |p^T C p| with p and C normalised
double conic_residual(const Conic& c, const Point& p);
double dual_conic_residual(const Conic& dual, const Line& l);

template <class T>
BasicLine<T> tangent_at(const BasicConic<T>& c, const BasicPoint<T>& p, const Tolerances& tol = Tolerances::defaults());

// pole of a line: the touch point when l is tangent
Point pole(const Conic& c, const Line& l);

Conic conic_through_five_points(const std::vector<Point>& pts, const Tolerances& tol = Tolerances::defaults());
// least-squares conic through n >= 5 points (smallest right singular vector)
Conic fit_conic(const std::vector<Point>& pts, const Tolerances& tol = Tolerances::defaults());

std::pair<Point, Point> line_conic_intersection(const Conic& c, const Line& l,
                                                const Tolerances& tol = Tolerances::defaults());

enum class DependenceMode { Direct, Inverse };
int dependence_rank(const std::vector<Conic>& conics, DependenceMode mode,
                    const Tolerances& tol = Tolerances::defaults());
// singular values (descending) of the flattened 6-vectors, for audits
std::vector<double> dependence_spectrum(const std::vector<Conic>& conics, DependenceMode mode);
int dependence_rank(const std::vector<ExactConic>& conics, DependenceMode mode);

ProjectiveTransform simultaneous_diagonalization(const Conic& a, const Conic& b,
                                                 const Tolerances& tol = Tolerances::defaults());

// Homography sending src[i] to dst[i] (least squares when more than four pairs).
ProjectiveTransform fit_homography(const std::vector<Point>& src, const std::vector<Point>& dst);

// centre of a central conic: pole of the line at infinity
Point conic_center(const Conic& c);
bool is_ellipse(const Conic& c);

// Helpers for affine charts.
inline double signed_area(const Vec3<double>& a, const Vec3<double>& b, const Vec3<double>& c) {
    // determinant of the three points normalised to z = 1 (sign carries orientation)
    return det(a, b, c) / (a[2] * b[2] * c[2]);
}

}  // namespace ponconf
