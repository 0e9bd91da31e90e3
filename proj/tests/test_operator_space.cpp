#include <gtest/gtest.h>

#include "fcw/operator_space.hpp"
#include "random_ops.hpp"

using namespace fcw;
using fcw::testing::Gen;

namespace {

DiffOp op(const char* s) { return parse_diffop(s, "z", "D"); }

PointCondition cond(long lambda, std::vector<long> jet) {
    PointCondition c{Scalar(lambda), {}};
    for (long v : jet) c.jet.emplace_back(v);
    return c;
}

GrPoint weyl() { return GrPoint(); }
GrPoint cusp() { return GrPoint({cond(0, {0, 1})}); }
GrPoint double_cusp() { return GrPoint({cond(0, {0, 1}), cond(0, {0, 0, 1})}); }
GrPoint cusp_at_1() { return GrPoint({cond(1, {0, 1})}); }

bool in_span(const std::vector<DiffOp>& basis, const DiffOp& d) {
    std::vector<DiffOp> all = basis;
    all.push_back(d);
    OpCoordinates c(all);
    Matrix<Scalar> m;
    for (const auto& b : basis) m.push_back(c.vec(b));
    return row_space_contains(m, Matrix<Scalar>{c.vec(d)});
}

// Independent oracle for small boxes: residuals from partial fractions of
// q_W * E.v (principal parts) and W's conditions on the polynomial part.
std::size_t brute_force_dimension(const GrPoint& V, const GrPoint& W, int m, int d, int window) {
    OpCoordinates c = operator_space_layout(V, W, m, d);
    std::vector<Scalar> poles;
    for (const auto& l : V.support()) poles.push_back(l);
    for (const auto& l : W.support())
        if (std::find(poles.begin(), poles.end(), l) == poles.end()) poles.push_back(l);
    Matrix<Scalar> rows;
    auto basis = basis_up_to_degree(V, window);
    for (std::size_t vi = 0; vi < basis.size(); ++vi) {
        std::vector<std::vector<std::pair<std::string, Scalar>>> cols(c.size());
        for (std::size_t u = 0; u < c.size(); ++u) {
            Vec<Scalar> e(c.size(), Scalar(0));
            e[u] = 1;
            RationalFunction g = RationalFunction(W.q()) * c.op(e).apply(basis[vi]);
            auto pf = partial_fractions(g, poles);
            for (const auto& [key, val] : pf.principal)
                cols[u].emplace_back("p" + to_string(key.first) + "_" + std::to_string(key.second), val);
            for (std::size_t k = 0; k < W.conditions().size(); ++k)
                cols[u].emplace_back("c" + std::to_string(k), W.conditions()[k].apply(pf.polynomial_part));
        }
        std::map<std::string, Vec<Scalar>> local;
        for (std::size_t u = 0; u < c.size(); ++u)
            for (const auto& [name, val] : cols[u]) {
                auto& r = local[name];
                if (r.empty()) r.assign(c.size(), Scalar(0));
                r[u] += val;
            }
        for (auto& kv : local) rows.push_back(kv.second);
    }
    return nullspace(rows, c.size()).size();
}

} // namespace

TEST(OperatorSpace, WeylBoxIsMonomials) {
    auto b = operator_space_basis(weyl(), weyl(), 2, 2);
    EXPECT_EQ(b.basis.size(), 9u);
    EXPECT_TRUE(b.stable);
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j) {
            DiffOp mono = DiffOp::term(RationalFunction::x().pow(i), j);
            EXPECT_TRUE(in_span(b.basis, mono));
        }
}

TEST(OperatorSpace, CuspContainsEigenOperator) {
    auto b = operator_space_basis(cusp(), cusp(), 2, 2);
    DiffOp L = op("D^2 - 2/z^2");
    // containment oracle: L.z^-1 = 0 and L.z^k = (k-2)(k+1) z^(k-2)
    EXPECT_TRUE(L.apply(parse_ratfunc("1/z", "z")).is_zero());
    for (int k = 2; k <= 6; ++k)
        EXPECT_EQ(L.apply(RationalFunction::x().pow(k)),
                  Scalar((k - 2) * (k + 1)) * RationalFunction::x().pow(k - 2));
    EXPECT_TRUE(in_span(b.basis, L));
    EXPECT_TRUE(in_span(b.basis, op("z^2")));
    EXPECT_TRUE(in_span(b.basis, op("z*D - 1") * op("z*D + 1")));
    EXPECT_FALSE(in_span(b.basis, op("D")));
    EXPECT_FALSE(in_span(b.basis, op("z")));
}

TEST(OperatorSpace, MultiplicationOperatorsIntoCusp) {
    auto b = operator_space_basis(weyl(), cusp(), 1, 2);
    EXPECT_TRUE(in_span(b.basis, op("z")));
    EXPECT_TRUE(in_span(b.basis, op("z^2")));
    EXPECT_FALSE(in_span(b.basis, op("1")));
    for (const auto& d : b.basis) EXPECT_TRUE(maps_into(d, weyl(), cusp())) << d;
}

TEST(OperatorSpace, EveryBasisElementMapsInto) {
    for (const auto& [V, W] : std::vector<std::pair<GrPoint, GrPoint>>{
             {cusp(), cusp()}, {double_cusp(), double_cusp()}, {cusp(), cusp_at_1()}, {weyl(), double_cusp()}}) {
        auto b = operator_space_basis(V, W, 3, 3);
        EXPECT_TRUE(b.stable);
        EXPECT_FALSE(b.basis.empty());
        for (const auto& d : b.basis) {
            EXPECT_TRUE(maps_into(d, V, W)) << d;
            EXPECT_LE(d.order(), 3);
            EXPECT_LE(d.deg_x(), 3);
        }
    }
}

TEST(OperatorSpace, DimensionMatchesBruteForce) {
    for (const auto& [V, W] : std::vector<std::pair<GrPoint, GrPoint>>{
             {cusp(), cusp()}, {double_cusp(), double_cusp()}, {cusp_at_1(), cusp()}, {weyl(), cusp()}}) {
        auto b = operator_space_basis(V, W, 2, 2);
        EXPECT_EQ(b.basis.size(), brute_force_dimension(V, W, 2, 2, b.window + 3));
    }
}

TEST(MapsInto, RejectsNonMembers) {
    EXPECT_FALSE(maps_into(op("D"), cusp(), cusp()));
    EXPECT_FALSE(maps_into(op("1/(z-3)"), cusp(), cusp()));
    EXPECT_FALSE(maps_into(op("z"), cusp(), cusp()));
    EXPECT_TRUE(maps_into(op("D^2 - 2/z^2"), cusp(), cusp()));
    EXPECT_TRUE(maps_into(op("z^3"), cusp(), cusp()));
    EXPECT_TRUE(maps_into(DiffOp(), cusp(), cusp()));
}

TEST(OperatorSpace, GammaEquivariance) {
    for (const auto& W : {cusp(), double_cusp()})
        for (const Poly& p : {Poly::x().pow(2), Poly::x().pow(3)}) {
            GrPoint Wm = gamma_act_on_point(W, -p);
            for (const auto& d : operator_space_basis(Wm, Wm, 2, 2).basis)
                EXPECT_TRUE(maps_into(gamma_conjugate(d, p), W, W)) << d;
            for (const auto& d : operator_space_basis(W, W, 2, 2).basis)
                EXPECT_TRUE(maps_into(gamma_conjugate(d, -p), Wm, Wm)) << d;
            // and a non-member stays out
            EXPECT_FALSE(maps_into(gamma_conjugate(op("D"), p), W, W));
        }
}

TEST(OperatorSpace, PolesBoundedByPrimaryData) {
    // p C[z, D] q lies in D(W) for p C[z] in W in q^-1 C[z]
    Gen g(301);
    for (const auto& W : {cusp(), double_cusp(), cusp_at_1()}) {
        Poly p(1);
        for (const auto& l : W.support()) p *= Poly::linear_power(l, W.primary_order(l) - W.k(l));
        DiffOp P{RationalFunction(p)}, Q{RationalFunction(W.q())};
        for (int trial = 0; trial < 6; ++trial) {
            DiffOp a = DiffOp::term(RationalFunction::x().pow(g.integer(0, 3)), g.integer(0, 3));
            EXPECT_TRUE(maps_into(P * a * Q, W, W)) << a;
        }
    }
}

TEST(OperatorSpace, DifferentialOperatorsFromPolynomialsReachAllOfV) {
    // span of D(C[z], V).C[z] over a window recovers the low-degree part of V
    for (const auto& V : {cusp(), double_cusp(), cusp_at_1()}) {
        auto b = operator_space_basis(weyl(), V, 2, 3);
        const Poly q = V.q();
        const int deg = 4 + V.total_k();
        Matrix<Scalar> span;
        for (const auto& d : b.basis)
            for (int t = 0; t <= 4; ++t) {
                RationalFunction h = d.apply(RationalFunction::x().pow(t));
                ASSERT_TRUE(membership(V, h));
                RationalFunction g = RationalFunction(q) * h;
                ASSERT_TRUE(g.is_polynomial());
                Vec<Scalar> r(static_cast<std::size_t>(deg + 10), Scalar(0));
                for (int i = 0; i <= g.num().degree(); ++i) r[static_cast<std::size_t>(i)] = g.num().coeff(i);
                span.push_back(r);
            }
        Matrix<Scalar> want;
        for (const auto& h : basis_up_to_degree(V, 3)) {
            Poly g = (RationalFunction(q) * h).num();
            Vec<Scalar> r(static_cast<std::size_t>(deg + 10), Scalar(0));
            for (int i = 0; i <= g.degree(); ++i) r[static_cast<std::size_t>(i)] = g.coeff(i);
            want.push_back(r);
        }
        EXPECT_TRUE(row_space_contains(span, want));
    }
}

TEST(OperatorSpace, EndomorphismClosure) {
    for (const auto& W : {cusp(), cusp_at_1()}) {
        auto endo = operator_space_basis(W, W, 2, 2);
        auto hom = operator_space_basis(weyl(), W, 2, 2);
        auto big = operator_space_basis(weyl(), W, 4, 4);
        for (const auto& a : endo.basis)
            for (const auto& h : hom.basis) {
                DiffOp p = a * h;
                EXPECT_TRUE(maps_into(p, weyl(), W));
                EXPECT_TRUE(in_span(big.basis, p));
            }
    }
}

TEST(OperatorSpace, CompositionLaw) {
    const std::vector<GrPoint> pts{weyl(), cusp(), cusp_at_1()};
    for (const auto& U : pts)
        for (const auto& V : pts)
            for (const auto& W : pts) {
                auto r = composition_check(U, V, W, 2, 2);
                EXPECT_TRUE(r.products_map_into) << U << " | " << V << " | " << W;
                EXPECT_TRUE(r.equal) << U << " | " << V << " | " << W << " box " << r.box_dim << " products "
                                     << r.product_dim << " factor " << r.factor_m;
            }
}
