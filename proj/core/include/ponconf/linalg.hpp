#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include <gmpxx.h>

namespace ponconf {

using Rational = mpq_class;

template <class T> using Vec3 = std::array<T, 3>;
template <class T> using Mat3 = std::array<std::array<T, 3>, 3>;

template <class T> struct ScalarTraits;
template <> struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr const char* backend = "f64";
};
template <> struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* backend = "exact";
};

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

template <class T> Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T> T dot(const Vec3<T>& a, const Vec3<T>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class T> Vec3<T> operator+(const Vec3<T>& a, const Vec3<T>& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
template <class T> Vec3<T> operator-(const Vec3<T>& a, const Vec3<T>& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
template <class T> Vec3<T> scale(const Vec3<T>& a, const T& s) { return {a[0] * s, a[1] * s, a[2] * s}; }

// componentwise product / square, used for the "squared coordinates" trick
template <class T> Vec3<T> hadamard(const Vec3<T>& a, const Vec3<T>& b) {
    return {a[0] * b[0], a[1] * b[1], a[2] * b[2]};
}

template <class T> bool is_zero_vec(const Vec3<T>& a) {
    return is_zero(a[0]) && is_zero(a[1]) && is_zero(a[2]);
}

inline double norm(const Vec3<double>& a) { return std::hypot(a[0], a[1], a[2]); }

template <class T> Mat3<T> zero_mat() {
    Mat3<T> m;
    for (auto& r : m)
        for (auto& x : r) x = T(0);
    return m;
}

template <class T> Mat3<T> diag(const T& a, const T& b, const T& c) {
    Mat3<T> m = zero_mat<T>();
    m[0][0] = a;
    m[1][1] = b;
    m[2][2] = c;
    return m;
}

template <class T> Mat3<T> identity3() { return diag<T>(T(1), T(1), T(1)); }

template <class T> Vec3<T> mul(const Mat3<T>& m, const Vec3<T>& v) {
    return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}

template <class T> Mat3<T> mul(const Mat3<T>& a, const Mat3<T>& b) {
    Mat3<T> r = zero_mat<T>();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

template <class T> Mat3<T> transpose(const Mat3<T>& m) {
    Mat3<T> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = m[j][i];
    return r;
}

template <class T> T det(const Mat3<T>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <class T> T det(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
    return dot(a, cross(b, c));
}

// adj(m) * m = det(m) * I
template <class T> Mat3<T> adjugate(const Mat3<T>& m) {
    Mat3<T> r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
            int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            r[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    }
    return r;
}

template <class T> T quad_form(const Mat3<T>& m, const Vec3<T>& v) { return dot(v, mul(m, v)); }

inline double frobenius(const Mat3<double>& m) {
    double s = 0;
    for (auto& r : m)
        for (double x : r) s += x * x;
    return std::sqrt(s);
}

// float: unit norm, largest-magnitude entry positive
inline Vec3<double> canonical(const Vec3<double>& v) {
    double n = norm(v);
    if (n == 0.0) return v;
    int big = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[big])) big = i;
    double s = v[big] < 0 ? -1.0 / n : 1.0 / n;
    return {v[0] * s, v[1] * s, v[2] * s};
}

// exact: coprime integers, first nonzero entry positive
Vec3<Rational> canonical(const Vec3<Rational>& v);

// |a x b| for unit vectors: sine of the angle between representatives
inline double projective_distance(const Vec3<double>& a, const Vec3<double>& b) {
    return norm(cross(canonical(a), canonical(b)));
}

// |<a,b>| after normalisation of both
inline double incidence_residual(const Vec3<double>& a, const Vec3<double>& b) {
    double na = norm(a), nb = norm(b);
    if (na == 0 || nb == 0) return 0;
    return std::abs(dot(a, b)) / (na * nb);
}

Vec3<double> to_double(const Vec3<Rational>& v);
std::string to_string(const Vec3<Rational>& v);

}  // namespace ponconf
