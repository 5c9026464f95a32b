#include "ponconf/linalg.hpp"

namespace ponconf {

Vec3<Rational> canonical(const Vec3<Rational>& v) {
    // clear denominators, divide by the content, make the first nonzero entry positive
    mpz_class l = 1;
    for (const auto& x : v)
        if (sgn(x) != 0) l = lcm(l, mpz_class(x.get_den()));
    Vec3<mpz_class> z;
    for (int i = 0; i < 3; ++i) z[i] = mpz_class(v[i] * l);
    mpz_class g = 0;
    for (const auto& x : z) g = gcd(g, x);
    if (g == 0) return v;
    int first = 0;
    while (first < 3 && z[first] == 0) ++first;
    if (z[first] < 0) g = -g;
    Vec3<Rational> r;
    for (int i = 0; i < 3; ++i) r[i] = Rational(mpz_class(z[i] / g));
    return r;
}

Vec3<double> to_double(const Vec3<Rational>& v) { return {v[0].get_d(), v[1].get_d(), v[2].get_d()}; }

std::string to_string(const Vec3<Rational>& v) {
    return "(" + v[0].get_str() + ", " + v[1].get_str() + ", " + v[2].get_str() + ")";
}

}  // namespace ponconf
