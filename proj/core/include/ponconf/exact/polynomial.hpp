#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ponconf/linalg.hpp"

namespace ponconf::exact {

// Variables of the oracle, in key order.
enum class Var : int { s = 0, t = 1, u = 2, v = 3, a = 4 };
inline constexpr int kVarCount = 5;
const char* var_name(Var x);

// Sparse polynomial over s,t,u,v,a with rational coefficients.
// Terms are kept sorted by packed exponent key, never with a zero coefficient.
class Polynomial {
public:
    using Key = std::uint64_t;
    using Term = std::pair<Key, Rational>;
    static constexpr int kBits = 12;

    Polynomial() = default;
    Polynomial(const Rational& c);  // NOLINT: constants convert implicitly
    Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT
    static Polynomial var(Var x, int power = 1);

    static Key pack(const std::array<int, kVarCount>& e);
    static std::array<int, kVarCount> unpack(Key k);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    int degree(Var x) const;
    int max_degree() const;  // max over variables of the per-variable degree
    int total_degree() const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

    Rational eval(const std::array<Rational, kVarCount>& at) const;
    // replace x by a polynomial
    Polynomial substitute(Var x, const Polynomial& by) const;

    std::string to_string() const;

private:
    std::vector<Term> terms_;
    friend Polynomial multiply_counted(const Polynomial& a, const Polynomial& b, std::size_t& raw_terms);
    void add_scaled(const Polynomial& o, int sign);
};

// Multiplication that also reports how many monomials were produced before merging.
Polynomial multiply_counted(const Polynomial& a, const Polynomial& b, std::size_t& raw_terms);

using PolyVec = Vec3<Polynomial>;

}  // namespace ponconf::exact
