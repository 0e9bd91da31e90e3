#pragma once

#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "fcw/operator_space.hpp"

namespace fcw {

struct DualSubalgebraBasis {
    std::vector<DiffOp> basis;  // echelon by order, leading coefficients 1
    std::vector<int> orders;    // ascending
    bool commutative = true;
    bool scalars_only = false;
    std::optional<int> conductor;  // least c with every order in [c, max] present
    bool rank_one = false;         // gcd of the positive orders is 1
};

/// The x-degree <= 0 part of span(ops).
inline DualSubalgebraBasis dual_subalgebra(const std::vector<DiffOp>& ops) {
    DualSubalgebraBasis out;
    std::vector<DiffOp> nonzero;
    for (const auto& d : ops)
        if (!d.is_zero()) nonzero.push_back(d);
    if (!nonzero.empty()) {
        OpCoordinates c(nonzero);
        Matrix<Scalar> rows;
        for (const auto& d : nonzero) rows.push_back(c.vec(d));
        Matrix<Scalar> cut =
            intersect_coordinate_subspace(c, std::move(rows), [&](std::size_t col) { return c.xdeg_of(col) <= 0; });
        if (!cut.empty()) {
            Echelon<Scalar> e = rref(std::move(cut), c.d_order());
            for (const auto& r : e.rows) {
                DiffOp d = c.op(r);
                out.basis.push_back(DiffOp(RationalFunction(1) / d.lead()) * d);
            }
        }
    }
    std::reverse(out.basis.begin(), out.basis.end());
    for (const auto& b : out.basis) out.orders.push_back(b.order());
    for (std::size_t i = 0; i < out.basis.size() && out.commutative; ++i)
        for (std::size_t j = i + 1; j < out.basis.size(); ++j)
            if (!commutator(out.basis[i], out.basis[j]).is_zero()) {
                out.commutative = false;
                break;
            }
    out.scalars_only = out.orders.size() == 1 && out.orders.front() == 0;
    if (!out.orders.empty()) {
        int c = out.orders.back();
        std::set<int> have(out.orders.begin(), out.orders.end());
        while (c > 0 && have.count(c - 1)) --c;
        out.conductor = c;
        int g = 0;
        for (int o : out.orders) g = std::gcd(g, o);
        out.rank_one = g == 1;
    }
    return out;
}

inline DualSubalgebraBasis dual_subalgebra(const OperatorSpaceBasis& box) { return dual_subalgebra(box.basis); }

/// Span of the words of length <= max_len in the generators, cut down to
/// D-order <= m.
inline std::vector<DiffOp> word_algebra_box(const std::vector<DiffOp>& gens, int max_len, int m) {
    std::vector<DiffOp> all{DiffOp(1)};
    std::vector<DiffOp> layer{DiffOp(1)};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<DiffOp> next;
        for (const auto& w : layer)
            for (const auto& g : gens) next.push_back(w * g);
        // keep a basis of each layer
        OpCoordinates c(next);
        Matrix<Scalar> rows;
        for (const auto& d : next) rows.push_back(c.vec(d));
        layer.clear();
        for (const auto& r : rref(std::move(rows)).rows) layer.push_back(c.op(r));
        all.insert(all.end(), layer.begin(), layer.end());
    }
    OpCoordinates c(all);
    Matrix<Scalar> rows;
    for (const auto& d : all) rows.push_back(c.vec(d));
    std::vector<DiffOp> out;
    for (const auto& r : intersect_coordinate_subspace(c, std::move(rows), [&](std::size_t col) { return c.j_of(col) <= m; }))
        out.push_back(c.op(r));
    return out;
}

struct GoodFraming {
    RationalFunction q;              // shift with deg_x q < 0
    std::vector<DiffOp> shifted;     // input basis rewritten in D + q, same order
    DualSubalgebraBasis normalized;  // echelon form of `shifted`
    bool first_two_constant = false;
    bool x_filtration_unchanged = false;
};

namespace detail {
inline bool first_two_constant(const DiffOp& d) {
    if (d.is_zero()) return true;
    auto is_const = [](const RationalFunction& f) { return f.is_zero() || (f.is_polynomial() && f.num().degree() == 0); };
    return is_const(d.lead()) && (d.order() == 0 || is_const(d.coeff(d.order() - 1)));
}
} // namespace detail

/// Removes the x-degree < 0 part of the subleading coefficient of the lowest
/// positive-order element by D -> D + q.
inline GoodFraming good_framing_normalize(const DualSubalgebraBasis& b) {
    const DiffOp* pick = nullptr;
    for (const auto& d : b.basis)
        if (d.order() > 0) {
            pick = &d;
            break;
        }
    if (!pick) throw DomainError("B-check trivial: no element of positive order");
    const int n = pick->order();
    const RationalFunction lc = pick->lead();
    const RationalFunction sub = pick->coeff(n - 1) / lc;
    RationalFunction c;
    if (!sub.is_zero() && sub.deg_x() == 0) c = RationalFunction(sub.lead_at_infinity());
    if (!sub.is_zero() && sub.deg_x() > 0)
        throw DomainError("subleading coefficient has positive x-degree: " + sub.str());
    GoodFraming out;
    out.q = (sub - c) * RationalFunction(Scalar(1, n));
    out.first_two_constant = true;
    out.x_filtration_unchanged = true;
    for (const auto& d : b.basis) {
        DiffOp s = shift_derivation(d, out.q);
        if (!detail::first_two_constant(s)) out.first_two_constant = false;
        if (s.deg_x() != d.deg_x()) out.x_filtration_unchanged = false;
        out.shifted.push_back(std::move(s));
    }
    out.normalized = dual_subalgebra(out.shifted);
    return out;
}

using Monomial = std::pair<int, int>;  // (x-degree, xi-degree)

struct CodimReport {
    int m = 0, d = 0;            // counting region: xi-degree <= m, 0 <= x-degree <= d
    int wide_m = 0, wide_d = 0;  // widest box used for the stability check
    std::vector<Monomial> missing_d;  // absent from the gr_D image
    std::vector<Monomial> missing_x;  // absent from the gr_x image
    std::size_t codim_d = 0, codim_x = 0;
    bool stable = false;
    bool equal = false;
};

namespace detail {

/// Leading monomials of span(ops), by D-order first or by x-degree first.
inline std::set<Monomial> leading_monomials(const std::vector<DiffOp>& ops, bool by_x) {
    std::set<Monomial> out;
    if (ops.empty()) return out;
    OpCoordinates c(ops);
    Echelon<Scalar> e = span_echelon(c, ops, by_x ? c.x_order() : c.d_order());
    for (auto p : e.pivots) out.emplace(c.xdeg_of(p), c.j_of(p));
    return out;
}

inline std::vector<Monomial> missing_in_region(const std::set<Monomial>& have, int m, int d) {
    std::vector<Monomial> out;
    for (int j = 0; j <= m; ++j)
        for (int k = 0; k <= d; ++k)
            if (!have.count({k, j})) out.emplace_back(k, j);
    return out;
}

} // namespace detail

/// Codimensions of the gr_D and gr_x images of D(W) within the (m, d) box,
/// compared with boxes widened twice by half in both bounds.
inline CodimReport symbol_codimensions(const GrPoint& W, int m, int d) {
    if (m < 0 || d < 0) throw DomainError("box bounds must be nonnegative");
    CodimReport r;
    r.m = m;
    r.d = d;
    auto widen = [](int b) { return b + (b + 1) / 2; };
    auto count = [&](int bm, int bd, std::vector<Monomial>& md, std::vector<Monomial>& mx) {
        auto box = operator_space_basis(W, W, bm, bd).basis;
        md = detail::missing_in_region(detail::leading_monomials(box, false), m, d);
        mx = detail::missing_in_region(detail::leading_monomials(box, true), m, d);
    };
    count(m, d, r.missing_d, r.missing_x);
    r.stable = true;
    int bm = m, bd = d;
    for (int step = 0; step < 2 && r.stable; ++step) {
        bm = widen(bm);
        bd = widen(bd);
        std::vector<Monomial> wd, wx;
        count(bm, bd, wd, wx);
        r.stable = wd == r.missing_d && wx == r.missing_x;
    }
    r.wide_m = bm;
    r.wide_d = bd;
    r.codim_d = r.missing_d.size();
    r.codim_x = r.missing_x.size();
    r.equal = r.codim_d == r.codim_x;
    return r;
}

struct FiltrationEntry {
    DiffOp element;
    std::optional<int> degree;  // least k with every length-(k+1) ad-word zero
    bool drops = true;          // [b, a] has degree <= k - 1 for every generator b
    bool some_drop_exact = true;  // some b with [b, a] of degree exactly k - 1 (k > 0)
};

struct FiltrationAudit {
    std::vector<FiltrationEntry> entries;
    std::size_t violations = 0;
};

/// Least k such that ad_{b_1} ... ad_{b_{k+1}} a = 0 for all generator choices.
inline std::optional<int> induced_degree(const DiffOp& a, const std::vector<DiffOp>& gens, int kmax) {
    if (a.is_zero()) return 0;
    std::vector<DiffOp> level{a};
    for (int k = 0; k <= kmax; ++k) {
        std::vector<DiffOp> next;
        for (const auto& x : level)
            for (const auto& b : gens) {
                DiffOp c = commutator(b, x);
                if (!c.is_zero()) next.push_back(std::move(c));
            }
        if (next.empty()) return k;
        // a basis suffices: ad is linear
        OpCoordinates c(next);
        Matrix<Scalar> rows;
        for (const auto& d : next) rows.push_back(c.vec(d));
        level.clear();
        for (const auto& r : rref(std::move(rows)).rows) level.push_back(c.op(r));
    }
    return std::nullopt;
}

inline FiltrationAudit mad_filtration_audit(const std::vector<DiffOp>& elements, const std::vector<DiffOp>& gens,
                                            int kmax) {
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (!commutator(gens[i], gens[j]).is_zero())
                throw DomainError("generators do not commute: " + gens[i].str() + ", " + gens[j].str());
    FiltrationAudit out;
    for (const auto& a : elements) {
        FiltrationEntry e{a, induced_degree(a, gens, kmax)};
        if (!e.degree) {
            ++out.violations;
            out.entries.push_back(std::move(e));
            continue;
        }
        const int k = *e.degree;
        bool exact = k == 0;
        for (const auto& b : gens) {
            auto kb = induced_degree(commutator(b, a), gens, kmax);
            if (k == 0) continue;
            if (!kb || (*kb > k - 1 && !commutator(b, a).is_zero())) e.drops = false;
            if (kb && *kb == k - 1 && !commutator(b, a).is_zero()) exact = true;
        }
        e.some_drop_exact = exact;
        if (!e.drops || !e.some_drop_exact) ++out.violations;
        out.entries.push_back(std::move(e));
    }
    return out;
}

struct LemmaPReport {
    int r = 0, s = 0;
    std::vector<RationalFunction> p;      // p_0, p_1, ...
    std::vector<std::optional<int>> val;  // valuation at lambda, empty for 0
    std::optional<int> vanishing;         // i with v(p_{i+1}) above s + (i+1)(r-1)
    bool identity_holds = true;           // n s = i (n - r) at the vanishing step
    bool matches_ad = true;               // p_i is the top coefficient of (ad a D^n)^i p
};

/// p_{i+1} = n a p_i' - i (n-1) a' p_i, against v(p_i) = s + i(r-1).
inline LemmaPReport lemma_p_check(const RationalFunction& a, int n, const RationalFunction& p, const Scalar& lambda,
                                  int imax) {
    if (n <= 0) throw DomainError("n must be positive");
    if (p.is_zero() || a.is_zero()) throw DomainError("a and p must be nonzero");
    LemmaPReport out;
    out.r = valuation_at(a, lambda);
    out.s = valuation_at(p, lambda);
    if (out.s == 0) throw DomainError("valuation of p at " + to_string(lambda) + " is 0");
    const RationalFunction da = a.derivative();
    const DiffOp D = DiffOp::term(a, n);
    DiffOp ad = DiffOp(p);
    out.p.push_back(p);
    out.val.push_back(out.s);
    for (int i = 0; i < imax; ++i) {
        const RationalFunction& pi = out.p.back();
        RationalFunction next = RationalFunction(n) * a * pi.derivative() - RationalFunction(i * (n - 1)) * da * pi;
        ad = commutator(D, ad);
        if (ad.coeff((i + 1) * (n - 1)) != next) out.matches_ad = false;
        out.p.push_back(next);
        out.val.push_back(next.is_zero() ? std::nullopt : std::optional<int>(valuation_at(next, lambda)));
        const int expected = out.s + (i + 1) * (out.r - 1);
        if (!out.vanishing && (!out.val.back() || *out.val.back() > expected)) {
            out.vanishing = i;
            out.identity_holds = n * out.s == i * (n - out.r);
        }
        if (next.is_zero()) break;
    }
    return out;
}

} // namespace fcw
