#include <gtest/gtest.h>

#include "ponconf/exact/oracle.hpp"

using namespace ponconf;
using namespace ponconf::exact;

namespace {
Rational q(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}
Vec3<Rational> ints(long a, long b, long c) { return {Rational(a), Rational(b), Rational(c)}; }
}  // namespace

TEST(Polynomial, Arithmetic) {
    auto s = Polynomial::var(Var::s), t = Polynomial::var(Var::t);
    auto sq = (s + t) * (s + t);
    EXPECT_EQ(sq.size(), 3u);
    EXPECT_EQ(sq.to_string(), "t^2 + 2*s*t + s^2");
    EXPECT_TRUE(((s + t) * (s - t) - (s * s - t * t)).is_zero());
    EXPECT_EQ(sq.degree(Var::s), 2);
    EXPECT_EQ(sq.degree(Var::u), 0);
    EXPECT_EQ(sq.eval({q(2), q(3), 0, 0, 0}), 25);
    // t -> s turns (s+t)^2 into 4 s^2
    EXPECT_EQ(sq.substitute(Var::t, s), Polynomial(4) * s * s);
    EXPECT_TRUE((sq - sq).is_zero());
    EXPECT_EQ((Polynomial(q(1, 2)) * Polynomial(2)).to_string(), "1");
    EXPECT_EQ(Polynomial::unpack(Polynomial::pack({1, 2, 3, 4, 5})), (std::array<int, 5>{1, 2, 3, 4, 5}));
}

TEST(ExactOracle, ParametrisedPoints) {
    EXPECT_EQ(phi_point(0), ExactPoint(ints(-1, 0, 1)));
    EXPECT_EQ(phi_point(1).v(), ints(0, 1, 1));
    EXPECT_EQ(phi_point(2).v(), ints(3, 4, 5));
    EXPECT_EQ(wedge(0, 0), ExactPoint(ints(-1, 0, 1)));
    EXPECT_EQ(wedge(1, -1).v(), ints(1, 0, 0));
    EXPECT_EQ(wedge(2, 3).v(), ints(5, 5, 7));
    EXPECT_EQ(wedge(q(1, 2), 5), wedge(5, q(1, 2)));
    ExactConic circle(diag<Rational>(1, 1, -1));
    for (Rational t : {q(0), q(3, 7), q(-11, 2)}) {
        EXPECT_EQ(quad_form(circle.matrix(), phi_point(t).v()), 0);
        EXPECT_EQ(incidence_value(phi_point(t), phi_tangent(t)), 0);
        EXPECT_EQ(incidence_value(wedge(t, 2), phi_tangent(t)), 0);
        EXPECT_EQ(incidence_value(wedge(t, 2), phi_tangent(2)), 0);
    }
}

TEST(ExactOracle, DiagonalConic) {
    ExactPoint p = wedge(2, 3), pp = wedge(5, 7);
    ExactConic b = diag_conic_through(p, pp);
    EXPECT_EQ(quad_form(b.matrix(), p.v()), 0);
    EXPECT_EQ(quad_form(b.matrix(), pp.v()), 0);
    // closed-form entries at (2,3,5,7), first two exchanged
    const long s = 2, t = 3, u = 5, v = 7;
    Vec3<Rational> shown{Rational((1 + s * t) * (1 + s * t) * (u + v) * (u + v) - (s + t) * (s + t) * (1 + u * v) * (1 + u * v)),
                         Rational(4 * (s * t - u * v) * (-1 + s * t * u * v)),
                         Rational(-(-1 + s * t) * (-1 + s * t) * (u + v) * (u + v) + (s + t) * (s + t) * (-1 + u * v) * (-1 + u * v))};
    Vec3<Rational> d{b.matrix()[0][0], b.matrix()[1][1], b.matrix()[2][2]};
    EXPECT_TRUE(is_zero_vec(cross(d, shown)));

    try {
        diag_conic_through(p, ExactPoint(ints(5, -5, 7)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SpecialPosition);
    }
    ExactPoint a(ints(3, 4, 5)), c(ints(15, 0, 9));
    ExactConic k = diag_conic_through(a, c);
    EXPECT_EQ(quad_form(k.matrix(), a.v()), 0);
    EXPECT_EQ(quad_form(k.matrix(), c.v()), 0);
}

TEST(ExactOracle, Lemma1Samples) {
    EXPECT_EQ(lemma1_check(2, 3, 5, 7), std::make_pair(Rational(0), Rational(0)));
    EXPECT_EQ(lemma1_check(q(1, 2), -3, 4, q(9, 5)), std::make_pair(Rational(0), Rational(0)));
    EXPECT_LT(lemma1_float_residual(2, 3, 5, 7), 1e-9);
    EXPECT_LT(lemma1_float_residual(q(1, 2), -3, 4, q(9, 5)), 1e-9);
    try {
        lemma1_check(2, 3, 2, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateParameters);
    }
    try {
        lemma1_check(2, 3, -2, -3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SpecialPosition);
    }
    EXPECT_EQ(classify_special(2, 3, -2, -3), SpecialCase::MirrorX);
    EXPECT_EQ(classify_special(2, 3, -3, -2), SpecialCase::SwapMirrorX);
    EXPECT_EQ(classify_special(2, 3, q(1, 2), q(1, 3)), SpecialCase::MirrorY);
    EXPECT_EQ(classify_special(2, 3, q(-1, 3), q(-1, 2)), SpecialCase::SwapMirrorOrigin);
    EXPECT_FALSE(classify_special(2, 3, 5, 7).has_value());
}

TEST(ExactOracle, Sweep) {
    auto r = lemma1_sweep(200, 42);
    EXPECT_TRUE(r.pass) << to_json(r);
    EXPECT_EQ(r.term_counts.at("nonzero"), 0u);
    EXPECT_GT(r.term_counts.at("zero"), 190u);
    EXPECT_EQ(to_json(r), to_json(lemma1_sweep(200, 42)));
    RationalSampler a(7), b(7);
    for (int i = 0; i < 50; ++i) {
        Rational x = a.next();
        EXPECT_EQ(x, b.next());
        EXPECT_NE(x, 0);
        EXPECT_LE(abs(x.get_num()), 50);
        EXPECT_LE(x.get_den(), 50);
    }
}

TEST(ExactOracle, PolynomialIdentity) {
    auto r = certify_identity_polynomial();
    EXPECT_TRUE(r.pass) << to_json(r);
    EXPECT_EQ(r.residual_terms, 0u);
    EXPECT_LE(r.max_degree, 12);
    EXPECT_GT(r.term_counts.at("det(BP,BP',GQ).before_cancellation"), 100u);
    EXPECT_GT(r.term_counts.at("control.terms"), 0u);
    bool swapped = false;
    for (const auto& c : r.checks)
        if (c.name == "closed-form B entries proportional (y,x,z order)") swapped = c.value == "yes";
    EXPECT_TRUE(swapped);
    EXPECT_EQ(to_json(r), to_json(certify_identity_polynomial()));
}

TEST(ExactOracle, SpecialCases) {
    for (auto c : all_special_cases()) {
        auto r = special_case_check(2, 3, q(1, 5), c);
        EXPECT_TRUE(r.pass) << to_json(r);
        auto r2 = special_case_check(q(-7, 4), q(2, 9), q(-13, 3), c);
        EXPECT_TRUE(r2.pass) << to_json(r2);
    }
    auto sw = special_case_check(2, 3, q(1, 5), SpecialCase::SwapMirrorX);
    EXPECT_EQ(sw.checks.back().name, "w(x,y) on G(a)");
    EXPECT_EQ(sw.checks.back().value, "0");
    EXPECT_EQ(special_case_from_string("swap-mirror"), SpecialCase::SwapMirrorX);
    auto m = special_case_check(2, 3, q(1, 5), SpecialCase::MirrorX);
    EXPECT_EQ(m.parameters.at("G").substr(0, 4), "(0, ");
    for (auto bad : {std::pair{q(2), q(2)}, std::pair{q(2), q(-2)}}) {
        try {
            special_case_check(bad.first, bad.second, 1, SpecialCase::SwapMirrorX);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::DegenerateParameters);
        }
    }
}
