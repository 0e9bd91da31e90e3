#include <gtest/gtest.h>

#include "fcw/mad.hpp"
#include "random_ops.hpp"

using namespace fcw;
using fcw::testing::Gen;

namespace {

DiffOp op(const char* s) { return parse_diffop(s); }

PointCondition cond(long lambda, std::vector<long> jet) {
    PointCondition c{Scalar(lambda), {}};
    for (long v : jet) c.jet.emplace_back(v);
    return c;
}

GrPoint weyl() { return GrPoint(); }
GrPoint cusp() { return GrPoint({cond(0, {0, 1})}); }
GrPoint double_cusp() { return GrPoint({cond(0, {0, 1}), cond(0, {0, 0, 1})}); }

} // namespace

TEST(DualSubalgebra, WeylIsPolynomialsInD) {
    auto b = dual_subalgebra(operator_space_basis(weyl(), weyl(), 4, 4));
    EXPECT_EQ(b.orders, (std::vector<int>{0, 1, 2, 3, 4}));
    for (int j = 0; j <= 4; ++j) EXPECT_EQ(b.basis[static_cast<std::size_t>(j)], pow(DiffOp::D(), j));
    EXPECT_TRUE(b.commutative);
    EXPECT_FALSE(b.scalars_only);
    EXPECT_TRUE(b.rank_one);
}

TEST(DualSubalgebra, CuspHasRankOne) {
    auto b = dual_subalgebra(operator_space_basis(cusp(), cusp(), 5, 4));
    EXPECT_EQ(b.orders, (std::vector<int>{0, 2, 3, 4, 5}));
    EXPECT_TRUE(b.commutative);
    EXPECT_TRUE(b.rank_one);
    EXPECT_EQ(b.conductor, 2);
    // oracle: x-degree <= 0 and commuting with the order-2 element
    const DiffOp L = op("D^2 - 2/x^2");
    EXPECT_EQ(b.basis[1], L);
    for (const auto& d : b.basis) {
        EXPECT_LE(d.deg_x(), 0);
        EXPECT_TRUE(commutator(d, L).is_zero()) << d;
        EXPECT_EQ(d.lead(), RationalFunction(1));
    }
}

TEST(DualSubalgebra, CounterexampleIsScalars) {
    auto x = DiffOp::x(), D = DiffOp::D();
    auto box = word_algebra_box({x, x * D, Scalar(4) * x * D * D + Scalar(2) * D}, 6, 6);
    for (const auto& d : box) EXPECT_LE(d.order(), 6);
    auto b = dual_subalgebra(box);
    EXPECT_TRUE(b.scalars_only);
    EXPECT_EQ(b.basis, std::vector<DiffOp>{DiffOp(1)});
}

TEST(GoodFraming, Examples) {
    auto cusp_b = dual_subalgebra(operator_space_basis(cusp(), cusp(), 4, 4));
    auto g = good_framing_normalize(cusp_b);
    EXPECT_TRUE(g.q.is_zero());
    EXPECT_TRUE(g.first_two_constant);

    // round trip: shift by 1/x and recover -1/x
    std::vector<DiffOp> shifted;
    for (const auto& d : cusp_b.basis) shifted.push_back(shift_derivation(d, parse_ratfunc("1/x")));
    auto sb = dual_subalgebra(shifted);
    EXPECT_TRUE(sb.commutative);
    auto h = good_framing_normalize(sb);
    EXPECT_EQ(h.q, parse_ratfunc("-1/x"));
    EXPECT_TRUE(h.first_two_constant);
    EXPECT_TRUE(h.x_filtration_unchanged);
    EXPECT_EQ(h.normalized.basis, cusp_b.basis);

    // a constant subleading coefficient is kept
    DualSubalgebraBasis w;
    w.basis = {DiffOp(1), op("D + 3 + 1/x")};
    auto k = good_framing_normalize(w);
    EXPECT_EQ(k.q, parse_ratfunc("1/x"));
    EXPECT_EQ(k.shifted.back(), op("D + 3"));

    DualSubalgebraBasis trivial;
    trivial.basis = {DiffOp(1)};
    EXPECT_THROW(good_framing_normalize(trivial), DomainError);
}

TEST(SymbolCodimensions, Examples) {
    auto w = symbol_codimensions(weyl(), 4, 4);
    EXPECT_EQ(w.codim_d, 0u);
    EXPECT_EQ(w.codim_x, 0u);
    EXPECT_TRUE(w.stable);

    auto c = symbol_codimensions(cusp(), 4, 4);
    EXPECT_TRUE(c.stable);
    EXPECT_TRUE(c.equal);
    // z and zeta are missing from the gr_D image
    EXPECT_NE(std::find(c.missing_d.begin(), c.missing_d.end(), Monomial{1, 0}), c.missing_d.end());
    EXPECT_NE(std::find(c.missing_d.begin(), c.missing_d.end(), Monomial{0, 1}), c.missing_d.end());

    auto dc = symbol_codimensions(double_cusp(), 4, 4);
    EXPECT_TRUE(dc.stable);
    EXPECT_TRUE(dc.equal);
    EXPECT_GT(dc.codim_d, c.codim_d);
}

TEST(SymbolCodimensions, TruncatedOracle) {
    // oracle: x^k xi^j is attained iff the box elements supported up to (j, k)
    // in (order, x-degree) lex order span more than those supported below it
    for (const auto& W : {cusp(), double_cusp()}) {
        auto box = operator_space_basis(W, W, 3, 3).basis;
        auto r = symbol_codimensions(W, 3, 3);
        for (int j = 0; j <= 3; ++j)
            for (int k = 0; k <= 3; ++k) {
                auto attained = [&](int kk) {
                    OpCoordinates c(box);
                    Matrix<Scalar> rows;
                    for (const auto& d : box) rows.push_back(c.vec(d));
                    auto sub = intersect_coordinate_subspace(c, rows, [&](std::size_t col) {
                        return c.j_of(col) < j || (c.j_of(col) == j && c.xdeg_of(col) <= kk);
                    });
                    return sub.size();
                };
                bool have = attained(k) > attained(k - 1);
                bool missing = std::find(r.missing_d.begin(), r.missing_d.end(), Monomial{k, j}) != r.missing_d.end();
                EXPECT_EQ(have, !missing) << j << " " << k;
            }
    }
}

TEST(FiltrationAudit, Examples) {
    std::vector<DiffOp> polys{op("x"), op("x^2")};
    auto a = mad_filtration_audit({op("x^2*D^3"), op("D"), op("x")}, polys, 8);
    EXPECT_EQ(a.violations, 0u);
    EXPECT_EQ(a.entries[0].degree, 3);
    EXPECT_EQ(a.entries[1].degree, 1);
    EXPECT_EQ(a.entries[2].degree, 0);

    // x*D against C[x]: [x, xD] = -x, then [x, -x] = 0
    EXPECT_EQ(induced_degree(op("x*D"), {op("x")}, 8), 1);

    // cusp with B the image of A_W: the order-2 eigen-operator has degree 2
    DiffOp z2 = op("x^2"), z3 = op("x^3");
    EXPECT_EQ(induced_degree(op("D^2 - 2/x^2"), {z2, z3}, 8), 2);

    EXPECT_THROW(mad_filtration_audit({op("x")}, {op("x"), op("D")}, 4), DomainError);
}

TEST(LemmaP, Examples) {
    auto r1 = lemma_p_check(parse_ratfunc("1"), 2, parse_ratfunc("x"), Scalar(0), 6);
    EXPECT_EQ(r1.vanishing, 1);
    EXPECT_TRUE(r1.identity_holds);
    EXPECT_TRUE(r1.matches_ad);

    auto r2 = lemma_p_check(parse_ratfunc("1"), 2, parse_ratfunc("x^2"), Scalar(0), 6);
    EXPECT_EQ(r2.vanishing, 2);
    EXPECT_TRUE(r2.identity_holds);

    auto r3 = lemma_p_check(parse_ratfunc("x"), 2, parse_ratfunc("x"), Scalar(0), 6);
    EXPECT_EQ(r3.r, 1);
    EXPECT_EQ(r3.vanishing, 2);
    EXPECT_TRUE(r3.identity_holds);
    EXPECT_TRUE(r3.matches_ad);

    EXPECT_THROW(lemma_p_check(parse_ratfunc("1"), 2, parse_ratfunc("x+1"), Scalar(0), 4), DomainError);
}

TEST(LemmaP, RandomizedAgainstCommutators) {
    Gen g(401);
    int vanished = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const Scalar lambda(g.integer(-1, 1));
        const int n = g.integer(1, 3);
        const int r = g.integer(0, 2);
        int s = g.integer(-2, 3);
        if (s == 0) s = 1;
        RationalFunction a = RationalFunction(Scalar(g.integer(1, 3))) * RationalFunction::linear_power(lambda, r);
        RationalFunction p = RationalFunction::linear_power(lambda, s) *
                             (RationalFunction(1) + RationalFunction(Scalar(g.integer(-2, 2))) * RationalFunction::linear_power(lambda, 1));
        auto rep = lemma_p_check(a, n, p, lambda, 6);
        EXPECT_TRUE(rep.matches_ad);
        if (rep.vanishing) {
            ++vanished;
            EXPECT_TRUE(rep.identity_holds) << a << " " << n << " " << p;
        }
    }
    EXPECT_GT(vanished, 0);
}
