#include <gtest/gtest.h>

#include "fcw/parse.hpp"
#include "random_ops.hpp"

using namespace fcw;
using fcw::testing::Gen;

namespace {

RationalFunction rf(const char* s) { return parse_ratfunc(s); }

// Oracle: multiplicity by repeated exact division by (x - lambda).
int multiplicity_by_division(Poly p, const Scalar& lambda) {
    const Poly factor = Poly::linear_power(lambda, 1);
    int k = 0;
    for (;;) {
        auto [q, r] = p.divmod(factor);
        if (!r.is_zero()) return k;
        p = q;
        ++k;
    }
}

} // namespace

TEST(Scalar, ParsesCanonicalFractions) {
    EXPECT_EQ(parse_scalar("6/4"), Scalar(3, 2));
    EXPECT_EQ(parse_scalar("-3"), Scalar(-3));
    EXPECT_EQ(to_string(Scalar(-1, 2)), "-1/2");
    EXPECT_THROW(parse_scalar("1/0"), DomainError);
    EXPECT_THROW(parse_scalar("abc"), InputError);
    EXPECT_THROW(parse_scalar("1/-2"), InputError);
}

TEST(ReduceRatfunc, CancelsCommonFactor) {
    Poly x = Poly::x();
    EXPECT_EQ(reduce_ratfunc(x * x - Poly(1), x - Poly(1)), RationalFunction(x + Poly(1)));
}

TEST(ReduceRatfunc, ZeroNumerator) {
    RationalFunction z = reduce_ratfunc(Poly(), Poly::x().pow(3));
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.den(), Poly(1));
}

TEST(ReduceRatfunc, ScalesToMonicDenominator) {
    RationalFunction f = reduce_ratfunc(Poly::x() * Scalar(2), Poly(4));
    // gcd oracle: 2x/4 = x/2, and the stored pair is coprime with den == 1
    EXPECT_EQ(f.num(), Poly({Scalar(0), Scalar(1, 2)}));
    EXPECT_EQ(f.den(), Poly(1));
    EXPECT_EQ(gcd(f.num(), f.den()), Poly(1));
}

TEST(ReduceRatfunc, RejectsZeroDenominator) {
    EXPECT_THROW(reduce_ratfunc(Poly(1), Poly()), DomainError);
}

TEST(Valuation, Examples) {
    EXPECT_EQ(valuation_at(RationalFunction(1), Scalar(0)), 0);
    EXPECT_EQ(valuation_at(rf("x^3"), Scalar(0)), 3);
    RationalFunction f = rf("(x+1)/(x-1)^2");
    int oracle = multiplicity_by_division(f.num(), Scalar(1)) - multiplicity_by_division(f.den(), Scalar(1));
    EXPECT_EQ(oracle, -2);
    EXPECT_EQ(valuation_at(f, Scalar(1)), oracle);
    EXPECT_THROW(valuation_at(RationalFunction(), Scalar(0)), DomainError);
}

TEST(Laurent, GeometricSeries) {
    auto s = laurent_expand(rf("1/(1-x)"), Scalar(0), 3);
    EXPECT_EQ(s.start, 0);
    // oracle: 1/(1-x) = sum x^i
    EXPECT_EQ(s.coeffs, (std::vector<Scalar>{1, 1, 1}));
}

TEST(Laurent, MonomialsAndPoles) {
    auto s = laurent_expand(rf("x"), Scalar(0), 2);
    EXPECT_EQ(s.start, 1);
    EXPECT_EQ(s.coeffs, (std::vector<Scalar>{1, 0}));
    auto t = laurent_expand(rf("1/x"), Scalar(0), 1);
    EXPECT_EQ(t.start, -1);
    EXPECT_EQ(t.coeffs, (std::vector<Scalar>{1}));
    EXPECT_THROW(laurent_expand(RationalFunction(), Scalar(0), 1), DomainError);
}

TEST(Laurent, ResummationAgreesToOrder) {
    Gen g(7);
    for (int trial = 0; trial < 30; ++trial) {
        RationalFunction f = g.nonzero_ratfunc(3);
        Scalar lambda = g.scalar(2);
        const int terms = 5;
        auto s = laurent_expand(f, lambda, terms);
        RationalFunction partial;
        for (int i = 0; i < terms; ++i)
            partial += s.coeffs[static_cast<std::size_t>(i)] * RationalFunction::linear_power(lambda, s.start + i);
        RationalFunction diff = f - partial;
        if (!diff.is_zero()) { EXPECT_GE(valuation_at(diff, lambda), s.start + terms); }
    }
}

TEST(PartialFractions, TwoSimplePoles) {
    auto pf = partial_fractions(rf("1/(x*(x-1))"), {Scalar(0), Scalar(1)});
    // residue oracle: c_lambda = ((x - lambda) f)(lambda)
    Scalar r0 = (rf("x") * rf("1/(x*(x-1))")).eval(Scalar(0));
    Scalar r1 = (rf("x-1") * rf("1/(x*(x-1))")).eval(Scalar(1));
    EXPECT_EQ(r0, Scalar(-1));
    EXPECT_EQ(r1, Scalar(1));
    EXPECT_EQ(pf.principal.at({Scalar(0), 1}), r0);
    EXPECT_EQ(pf.principal.at({Scalar(1), 1}), r1);
    EXPECT_TRUE(pf.polynomial_part.is_zero());
}

TEST(PartialFractions, PolynomialAndDoublePole) {
    auto pf = partial_fractions(rf("x^2"), {});
    EXPECT_EQ(pf.polynomial_part, Poly::x().pow(2));
    EXPECT_TRUE(pf.principal.empty());
    auto q = partial_fractions(rf("1/x^2"), {Scalar(0)});
    EXPECT_EQ(q.principal.size(), 1u);
    EXPECT_EQ(q.principal.at({Scalar(0), 2}), Scalar(1));
}

TEST(PartialFractions, RejectsUnlistedPole) {
    try {
        partial_fractions(rf("1/(x-3)"), {Scalar(0)});
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
    }
}

TEST(PartialFractions, ResumIsIdentity) {
    Gen g(11);
    for (int trial = 0; trial < 40; ++trial) {
        RationalFunction f = g.ratfunc(4);
        auto pf = partial_fractions(f, {Scalar(0), Scalar(1), Scalar(-1)});
        EXPECT_EQ(pf.resum(), f);
    }
}

TEST(FieldAxioms, HoldOnRandomInputs) {
    Gen g(3);
    for (int trial = 0; trial < 60; ++trial) {
        RationalFunction a = g.ratfunc(), b = g.ratfunc(), c = g.ratfunc();
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_TRUE((a - a).is_zero());
        if (!a.is_zero()) { EXPECT_EQ(a * a.inverse(), RationalFunction(1)); }
    }
}

TEST(ValuationProperties, MultiplicativeAndDerivativeDrop) {
    Gen g(5);
    for (int trial = 0; trial < 60; ++trial) {
        RationalFunction f = g.nonzero_ratfunc(3), h = g.nonzero_ratfunc(3);
        Scalar lambda(g.integer(-1, 1));
        EXPECT_EQ(valuation_at(f * h, lambda), valuation_at(f, lambda) + valuation_at(h, lambda));
        int k = valuation_at(f, lambda);
        if (k != 0) { EXPECT_EQ(valuation_at(f.derivative(), lambda), k - 1); }
    }
}

TEST(Parsing, RoundTripsThroughStr) {
    for (const char* s : {"x^2 + 4*x + 2", "-2*x^-2", "(x + 1)/(x - 1)^2", "1/2*x"}) {
        RationalFunction f = rf(s);
        EXPECT_EQ(parse_ratfunc(f.str()), f) << s << " -> " << f.str();
    }
    EXPECT_EQ(rf("-2*x^-2").str(), "-2*x^-2");
    EXPECT_THROW(rf("x +"), InputError);
    EXPECT_THROW(rf("1/(x-x)"), InputError);
}
