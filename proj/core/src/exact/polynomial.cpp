#include "ponconf/exact/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "ponconf/error.hpp"

namespace ponconf::exact {

namespace {
constexpr Polynomial::Key kMask = (Polynomial::Key{1} << Polynomial::kBits) - 1;

int exponent(Polynomial::Key k, int i) { return static_cast<int>((k >> (Polynomial::kBits * i)) & kMask); }
}  // namespace

const char* var_name(Var x) {
    static const char* names[] = {"s", "t", "u", "v", "a"};
    return names[static_cast<int>(x)];
}

Polynomial::Polynomial(const Rational& c) {
    if (sgn(c) != 0) terms_.emplace_back(0, c);
}

Polynomial Polynomial::var(Var x, int power) {
    std::array<int, kVarCount> e{};
    e[static_cast<std::size_t>(x)] = power;
    Polynomial p;
    p.terms_.emplace_back(pack(e), Rational(1));
    return p;
}

Polynomial::Key Polynomial::pack(const std::array<int, kVarCount>& e) {
    Key k = 0;
    for (int i = 0; i < kVarCount; ++i) {
        if (e[static_cast<std::size_t>(i)] < 0 || static_cast<Key>(e[static_cast<std::size_t>(i)]) > kMask)
            throw Error(ErrorCode::InvalidArgument, "exponent out of packable range");
        k |= static_cast<Key>(e[static_cast<std::size_t>(i)]) << (kBits * i);
    }
    return k;
}

std::array<int, kVarCount> Polynomial::unpack(Key k) {
    std::array<int, kVarCount> e{};
    for (int i = 0; i < kVarCount; ++i) e[static_cast<std::size_t>(i)] = exponent(k, i);
    return e;
}

int Polynomial::degree(Var x) const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, exponent(k, static_cast<int>(x)));
    return d;
}

int Polynomial::max_degree() const {
    int d = 0;
    for (int i = 0; i < kVarCount; ++i) d = std::max(d, degree(static_cast<Var>(i)));
    return d;
}

int Polynomial::total_degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) {
        int s = 0;
        for (int i = 0; i < kVarCount; ++i) s += exponent(k, i);
        d = std::max(d, s);
    }
    return d;
}

Polynomial Polynomial::operator-() const {
    Polynomial p = *this;
    for (auto& [k, c] : p.terms_) c = -c;
    return p;
}

// merge of two sorted term lists
void Polynomial::add_scaled(const Polynomial& o, int sign) {
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto i = terms_.begin();
    auto j = o.terms_.begin();
    while (i != terms_.end() || j != o.terms_.end()) {
        if (j == o.terms_.end() || (i != terms_.end() && i->first < j->first)) {
            out.push_back(std::move(*i++));
        } else if (i == terms_.end() || j->first < i->first) {
            out.emplace_back(j->first, sign > 0 ? j->second : Rational(-j->second));
            ++j;
        } else {
            Rational c = sign > 0 ? Rational(i->second + j->second) : Rational(i->second - j->second);
            if (sgn(c) != 0) out.emplace_back(i->first, std::move(c));
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    add_scaled(o, 1);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    add_scaled(o, -1);
    return *this;
}

Polynomial multiply_counted(const Polynomial& a, const Polynomial& b, std::size_t& raw_terms) {
    // exponents never carry between fields as long as each stays below 2^kBits
    if (a.max_degree() + b.max_degree() >= (1 << Polynomial::kBits))
        throw Error(ErrorCode::InvalidArgument, "polynomial degree overflow");
    std::unordered_map<Polynomial::Key, Rational> acc;
    acc.reserve(a.size() * b.size());
    raw_terms = 0;
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            acc[ka + kb] += ca * cb;
            ++raw_terms;
        }
    std::vector<Polynomial::Term> terms;
    terms.reserve(acc.size());
    for (auto& [k, c] : acc)
        if (sgn(c) != 0) terms.emplace_back(k, std::move(c));
    std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    Polynomial out;
    out.terms_ = std::move(terms);
    return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::size_t raw = 0;
    return multiply_counted(a, b, raw);
}

Rational Polynomial::eval(const std::array<Rational, kVarCount>& at) const {
    Rational sum = 0;
    for (const auto& [k, c] : terms_) {
        Rational term = c;
        for (int i = 0; i < kVarCount; ++i)
            for (int e = exponent(k, i); e > 0; --e) term *= at[static_cast<std::size_t>(i)];
        sum += term;
    }
    return sum;
}

Polynomial Polynomial::substitute(Var x, const Polynomial& by) const {
    const int xi = static_cast<int>(x);
    std::vector<Polynomial> powers{Polynomial(1)};
    Polynomial out;
    for (const auto& [k, c] : terms_) {
        int e = exponent(k, xi);
        while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * by);
        Polynomial rest;
        rest.terms_.emplace_back(k & ~(kMask << (kBits * xi)), c);
        out += rest * powers[static_cast<std::size_t>(e)];
    }
    return out;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [k, c] = *it;
        Rational mag = abs(c);
        os << (sgn(c) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        bool constant = k == 0;
        if (constant || mag != 1) os << mag.get_str() << (constant ? "" : "*");
        bool first_var = true;
        for (int i = 0; i < kVarCount; ++i) {
            int e = exponent(k, i);
            if (e == 0) continue;
            if (!first_var) os << "*";
            os << var_name(static_cast<Var>(i));
            if (e > 1) os << "^" << e;
            first_var = false;
        }
        first = false;
    }
    return os.str();
}

}  // namespace ponconf::exact
