#include <gtest/gtest.h>

#include "fcw/diffop.hpp"
#include "random_ops.hpp"

using namespace fcw;
using fcw::testing::Gen;

namespace {

DiffOp op(const char* s) { return parse_diffop(s); }
RationalFunction rf(const char* s) { return parse_ratfunc(s); }

// Operators in Q(x)[D] are determined by their action on functions; the
// samples below separate operators of order <= 8.
std::vector<RationalFunction> sample_functions() {
    std::vector<RationalFunction> v;
    for (int k = 0; k <= 8; ++k) v.push_back(RationalFunction::x().pow(k));
    v.push_back(rf("1/(x-2)"));
    v.push_back(rf("x/(x+3)^2"));
    return v;
}

// Oracle for products: (a*b).f must equal a.(b.f) on every sample.
void expect_product_by_action(const DiffOp& a, const DiffOp& b, const DiffOp& product) {
    for (const auto& f : sample_functions()) EXPECT_EQ(product.apply(f), a.apply(b.apply(f))) << f;
}

} // namespace

TEST(OdoMul, DefiningRelation) {
    EXPECT_EQ(DiffOp::D() * DiffOp::x(), op("x*D + 1"));
}

TEST(OdoMul, LeibnizExamples) {
    DiffOp lhs = pow(DiffOp::D(), 2) * pow(DiffOp::x(), 2);
    expect_product_by_action(pow(DiffOp::D(), 2), pow(DiffOp::x(), 2), lhs);
    EXPECT_EQ(lhs, op("x^2*D^2 + 4*x*D + 2"));

    DiffOp xd = op("x*D");
    expect_product_by_action(xd, xd, xd * xd);
    EXPECT_EQ(xd * xd, op("x^2*D^2 + x*D"));
}

TEST(OdoMul, RandomizedRingLaws) {
    Gen g(17);
    for (int trial = 0; trial < 25; ++trial) {
        DiffOp a = g.nonzero_diffop(2), b = g.nonzero_diffop(2), c = g.nonzero_diffop(2);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ((a + b) * c, a * c + b * c);
        DiffOp ab = a * b;
        EXPECT_EQ(ab.order(), a.order() + b.order());
        EXPECT_EQ(ab.lead(), a.lead() * b.lead());
        expect_product_by_action(a, b, ab);
    }
}

TEST(Commutator, Examples) {
    EXPECT_EQ(commutator(DiffOp::D(), DiffOp::x()), DiffOp(1));
    EXPECT_EQ(commutator(op("x*D"), DiffOp::D()), -DiffOp::D());
    EXPECT_TRUE(commutator(DiffOp::x(), op("x^2")).is_zero());
}

TEST(Commutator, OrderDrops) {
    Gen g(19);
    for (int trial = 0; trial < 25; ++trial) {
        DiffOp a = g.nonzero_diffop(3), b = g.nonzero_diffop(3);
        DiffOp c = commutator(a, b);
        if (!c.is_zero()) { EXPECT_LT(c.order(), a.order() + b.order()); }
    }
}

TEST(AdNilpotency, Examples) {
    auto r = ad_nilpotency_degree(DiffOp::x(), DiffOp::D(), 10);
    ASSERT_TRUE(r.nilpotent());
    EXPECT_EQ(*r.degree, 2);
    ASSERT_EQ(r.chain.size(), 2u);
    EXPECT_EQ(r.chain[0], DiffOp(-1));
    EXPECT_TRUE(r.chain[1].is_zero());

    auto s = ad_nilpotency_degree(pow(DiffOp::D(), 2), DiffOp::x(), 10);
    ASSERT_TRUE(s.nilpotent());
    EXPECT_EQ(*s.degree, 2);
    EXPECT_EQ(s.chain[0], Scalar(2) * DiffOp::D());

    auto t = ad_nilpotency_degree(op("x*D"), DiffOp::D(), 10);
    EXPECT_FALSE(t.nilpotent());
    ASSERT_EQ(t.chain.size(), 10u);
    // chain is (-1)^k D
    for (int k = 1; k <= 10; ++k)
        EXPECT_EQ(t.chain[static_cast<std::size_t>(k - 1)], Scalar(k % 2 ? -1 : 1) * DiffOp::D());

    EXPECT_THROW(ad_nilpotency_degree(DiffOp::x(), DiffOp::D(), 0), DomainError);
}

TEST(PrincipalSymbol, Examples) {
    BiSymbol s = principal_symbol(op("x*D^2"));
    EXPECT_EQ(s.terms().size(), 1u);
    EXPECT_EQ(s.coeff(1, 2), Scalar(1));
    BiSymbol t = principal_symbol(op("D^2 - 2*x^-2"));
    EXPECT_EQ(t.terms().size(), 1u);
    EXPECT_EQ(t.coeff(0, 2), Scalar(1));
    try {
        principal_symbol(op("x^-1*D + x"));
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("x^-1"), std::string::npos);
    }
}

TEST(PrincipalSymbol, Multiplicative) {
    Gen g(23);
    for (int trial = 0; trial < 25; ++trial) {
        DiffOp a = g.nonzero_diffop(2, 2, true), b = g.nonzero_diffop(2, 2, true);
        EXPECT_EQ(principal_symbol(a * b), principal_symbol(a) * principal_symbol(b));
    }
}

TEST(XSymbol, Examples) {
    auto a = x_symbol_and_degree(op("4*x*D^2 + 2*D"));
    EXPECT_EQ(a.degree, 1);
    EXPECT_EQ(a.symbol.terms().size(), 1u);
    EXPECT_EQ(a.symbol.coeff(1, 2), Scalar(4));
    auto b = x_symbol_and_degree(op("D^3"));
    EXPECT_EQ(b.degree, 0);
    EXPECT_EQ(b.symbol.coeff(0, 3), Scalar(1));
    // per-coefficient degree oracle: deg(x^2) = 2 > deg(x) = 1
    auto c = x_symbol_and_degree(op("x^2 + x*D"));
    EXPECT_EQ(c.degree, 2);
    EXPECT_EQ(c.symbol.terms().size(), 1u);
    EXPECT_EQ(c.symbol.coeff(2, 0), Scalar(1));
    EXPECT_THROW(x_symbol_and_degree(DiffOp()), DomainError);
}

TEST(XSymbol, SubadditiveWithEqualityWhenSymbolsMultiply) {
    Gen g(29);
    for (int trial = 0; trial < 40; ++trial) {
        DiffOp a = g.nonzero_diffop(2), b = g.nonzero_diffop(2);
        auto sa = x_symbol_and_degree(a), sb = x_symbol_and_degree(b);
        DiffOp ab = a * b;
        ASSERT_FALSE(ab.is_zero());
        auto sab = x_symbol_and_degree(ab);
        EXPECT_LE(sab.degree, sa.degree + sb.degree);
        BiSymbol prod = sa.symbol * sb.symbol;
        if (!prod.is_zero()) {
            EXPECT_EQ(sab.degree, sa.degree + sb.degree);
            EXPECT_EQ(sab.symbol, prod);
        }
    }
}

TEST(GammaConjugate, Examples) {
    EXPECT_EQ(gamma_conjugate(DiffOp::D(), Poly::x().pow(2)), op("D - 2*x"));
    EXPECT_EQ(gamma_conjugate(DiffOp::x(), Poly({1, 2, 3})), DiffOp::x());
    DiffOp got = gamma_conjugate(pow(DiffOp::D(), 2), Poly::x());
    // substitute-and-expand oracle: (D - 1)((D - 1) f)
    DiffOp t = DiffOp::D() - DiffOp(1);
    for (const auto& f : sample_functions()) EXPECT_EQ(got.apply(f), t.apply(t.apply(f)));
    EXPECT_EQ(got, op("D^2 - 2*D + 1"));
}

TEST(GammaConjugate, HomomorphismAndInverse) {
    Gen g(31);
    for (int trial = 0; trial < 20; ++trial) {
        DiffOp a = g.nonzero_diffop(2), b = g.nonzero_diffop(2);
        Poly p = g.poly(3);
        EXPECT_EQ(gamma_conjugate(a * b, p), gamma_conjugate(a, p) * gamma_conjugate(b, p));
        EXPECT_EQ(gamma_conjugate(gamma_conjugate(a, p), -p), a);
    }
}

TEST(ShiftDerivation, Examples) {
    EXPECT_EQ(shift_derivation(DiffOp::D(), rf("1/x")), op("D - x^-1"));
    Scalar c(3, 2);
    EXPECT_EQ(shift_derivation(pow(DiffOp::D(), 2), RationalFunction(c)),
              pow(DiffOp::D(), 2) - (2 * c) * DiffOp::D() + DiffOp(c * c));
    DiffOp a = op("D^3 + x*D");
    DiffOp s = shift_derivation(a, rf("1/x"));
    EXPECT_EQ(s.order(), a.order());
    EXPECT_EQ(x_symbol_and_degree(s).degree, x_symbol_and_degree(a).degree);
    EXPECT_EQ(x_symbol_and_degree(s).symbol, x_symbol_and_degree(a).symbol);
}

TEST(ShiftDerivation, NegativeDegreeShiftPreservesXFiltration) {
    Gen g(37);
    for (int trial = 0; trial < 30; ++trial) {
        DiffOp a = g.nonzero_diffop(3, 2, true);
        RationalFunction q = RationalFunction(g.poly(1), Poly::x().pow(2) + Poly(1));
        if (q.is_zero()) continue;
        ASSERT_LT(q.deg_x(), 0);
        DiffOp s = shift_derivation(a, q);
        EXPECT_EQ(s.order(), a.order());
        EXPECT_EQ(x_symbol_and_degree(s).degree, x_symbol_and_degree(a).degree);
        EXPECT_EQ(shift_derivation(s, -q), a);
    }
}

TEST(MadFiltration, WeylWithPolynomialSubalgebra) {
    // For a = x^i D^j the filtration induced by B = C[x] has degree j, and
    // [b, a] drops it by exactly one for every nonconstant b.
    auto induced = [](const DiffOp& a, const std::vector<DiffOp>& bs) {
        // least k with every length-(k+1) ad-word vanishing
        std::vector<DiffOp> level{a};
        for (int k = 0; k < 12; ++k) {
            std::vector<DiffOp> next;
            for (const auto& s : level)
                for (const auto& b : bs) {
                    DiffOp c = commutator(b, s);
                    if (!c.is_zero()) next.push_back(c);
                }
            if (next.empty()) return k;
            level = std::move(next);
        }
        return -1;
    };
    std::vector<DiffOp> bs{DiffOp::x(), op("x^2"), op("x^3 + 1")};
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 3; ++j) {
            DiffOp a = op("x").coeff(0).pow(i) * pow(DiffOp::D(), j);
            int k = induced(a, bs);
            EXPECT_EQ(k, j);
            if (k > 0) {
                for (const auto& b : bs) EXPECT_EQ(induced(commutator(b, a), bs), k - 1);
            }
        }
}

TEST(Printing, MatchesDocumentedFormat) {
    EXPECT_EQ(op("x^2*D^2 + 4*x*D + 2").str(), "x^2*D^2 + 4*x*D + 2");
    EXPECT_EQ(op("D^2 - 2/x^2").str(), "D^2 - 2*x^-2");
    EXPECT_EQ(op("(x+1)/(x-1)*D").str(), "((x + 1)/(x - 1))*D");
    EXPECT_EQ(DiffOp().str(), "0");
    Gen g(41);
    for (int trial = 0; trial < 20; ++trial) {
        DiffOp a = g.diffop(3);
        EXPECT_EQ(parse_diffop(a.str()), a) << a.str();
    }
}
