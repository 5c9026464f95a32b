#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ponconf/exact/polynomial.hpp"
#include "ponconf/projective.hpp"
#include "ponconf/scene.hpp"

namespace ponconf::exact {

// Unit circle chart: points (t^2-1, 2t, t^2+1), tangents (t^2-1, 2t, -t^2-1).
ExactPoint phi_point(const Rational& t);
ExactLine phi_tangent(const Rational& t);
// Meet of the tangents at s and t, with the 2(s-t) factor removed (s = t gives the touch point).
ExactPoint wedge(const Rational& s, const Rational& t);
Vec3<Rational> wedge_coords(const Rational& s, const Rational& t);
PolyVec wedge_poly(const Polynomial& s, const Polynomial& t);

// Diagonal conic through p and q from squared coordinates; SpecialPosition when p^2 ~ q^2.
ExactConic diag_conic_through(const ExactPoint& p, const ExactPoint& q);

// det(B P, B P', G Q) and det(B P, B P', G Q') for P = w(s,t), P' = w(u,v), Q = w(s,u), Q' = w(t,v).
std::pair<Rational, Rational> lemma1_check(const Rational& s, const Rational& t, const Rational& u, const Rational& v);
// Same concurrency evaluated with the float engine; returns the worse of the two normalised determinants.
double lemma1_float_residual(const Rational& s, const Rational& t, const Rational& u, const Rational& v);

// Special positions: {u,v} is the image of {s,t} under a reflection sigma.
// mirror: (u,v) = (sigma s, sigma t); swap: (u,v) = (sigma t, sigma s).
// sigma: x -> -t, y -> 1/t, origin -> -1/t.
enum class SpecialCase { MirrorX, SwapMirrorX, MirrorY, SwapMirrorY, MirrorOrigin, SwapMirrorOrigin };
std::string to_string(SpecialCase c);
SpecialCase special_case_from_string(const std::string& s);
const std::vector<SpecialCase>& all_special_cases();
std::optional<SpecialCase> classify_special(const Rational& s, const Rational& t, const Rational& u, const Rational& v);

struct CertificateCheck {
    std::string name;
    std::string value;
    bool ok = false;
};

struct CertificateReport {
    std::string identity;
    std::vector<std::string> variables;
    std::map<std::string, std::string> parameters;
    int max_degree = 0;
    int degree_bound = 12;
    std::map<std::string, std::size_t> term_counts;
    std::size_t residual_terms = 0;
    std::vector<CertificateCheck> checks;
    std::vector<std::string> notes;
    bool pass = false;

    std::string verdict() const { return pass ? "pass" : "fail"; }
    void check(std::string name, std::string value, bool ok) { checks.push_back({std::move(name), std::move(value), ok}); }
    bool all_checks_ok() const;
};

std::string to_json(const CertificateReport& r, int indent = 2);
std::string to_json(const std::vector<CertificateReport>& rs, int indent = 2);

// Both determinant identities expanded as polynomials in s,t,u,v; throws NonZeroResidualPolynomial if either survives.
CertificateReport certify_identity_polynomial();
CertificateReport special_case_check(const Rational& s, const Rational& t, const Rational& a, SpecialCase c);

// Rationals p/q with p, q in [-50, 50] \ {0}.
class RationalSampler {
public:
    explicit RationalSampler(std::uint64_t seed) : rng_(seed) {}
    Rational next();

private:
    std::mt19937_64 rng_;
    int draw();
};

// lemma1_check over pseudorandom quadruples; special and non-distinct draws are skipped and counted.
CertificateReport lemma1_sweep(std::size_t samples, std::uint64_t seed);

// Exact scene of one instance of the core lemma: P, P', Q, Q', their tangents, the unit circle and B, G;
// the per-instance certificate rides along as the "certificate" extension.
ExactScene lemma1_scene(const Rational& s, const Rational& t, const Rational& u, const Rational& v);

}  // namespace ponconf::exact
