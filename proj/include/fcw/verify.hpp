#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fcw/baker.hpp"
#include "fcw/calogero_moser.hpp"
#include "fcw/mad.hpp"
#include "fcw/operator_space.hpp"
#include "fcw/psdo.hpp"

namespace fcw {

enum class Suite { core, extended };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

namespace detail {

inline PointCondition jet_condition(long lambda, std::initializer_list<long> jet) {
    PointCondition c{Scalar(lambda), {}};
    for (long v : jet) c.jet.emplace_back(v);
    return c;
}

struct Examples {
    GrPoint weyl;
    GrPoint cusp{{jet_condition(0, {0, 1})}};
    GrPoint double_cusp{{jet_condition(0, {0, 1}), jet_condition(0, {0, 0, 1})}};
    GrPoint cusp_at_1{{jet_condition(1, {0, 1})}};
};

/// Collects failures; the first few are kept for the report.
class Tally {
public:
    void check(bool ok, const std::string& what) {
        ++checks_;
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    bool pass() const { return failures_ == 0; }
    std::string summary(const std::string& extra = "") const {
        std::ostringstream os;
        os << checks_ - failures_ << "/" << checks_ << " checks";
        if (!extra.empty()) os << ", " << extra;
        if (!notes_.empty()) os << "; failed: " << notes_;
        return os.str();
    }

private:
    std::size_t checks_ = 0, failures_ = 0;
    std::string notes_;
};

inline CriterionResult timed(int id, const std::string& name,
                             const std::function<void(CriterionResult&)>& body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline bool in_span(const std::vector<DiffOp>& basis, const DiffOp& d) {
    std::vector<DiffOp> all = basis;
    all.push_back(d);
    OpCoordinates c(all);
    Matrix<Scalar> rows;
    for (const auto& b : basis) rows.push_back(c.vec(b));
    const std::size_t r0 = rank(rows);
    rows.push_back(c.vec(d));
    return rank(rows) == r0;
}

} // namespace detail

inline CriterionResult verify_weyl_baseline(Suite s) {
    return detail::timed(1, "Weyl baseline", [s](CriterionResult& r) {
        const int deg = s == Suite::core ? 8 : 12, box = s == Suite::core ? 4 : 6;
        const GrPoint W;
        detail::Tally t;
        BakerData b = compute_baker(W);
        t.check(b.g.empty() && baker_string(b) == "exp(x*z)", "psi");
        std::vector<int> full;
        for (int i = 0; i <= deg; ++i) full.push_back(i);
        t.check(spectral_algebra(W, deg).staircase == full, "staircase");
        auto ops = operator_space_basis(W, W, box, box);
        bool monomials = ops.basis.size() == static_cast<std::size_t>((box + 1) * (box + 1));
        for (int i = 0; i <= box && monomials; ++i)
            for (int j = 0; j <= box && monomials; ++j)
                monomials = detail::in_span(ops.basis, DiffOp::term(RationalFunction::x().pow(i), j));
        t.check(monomials, "monomial box");
        t.check(wave_operator(W, -kDefaultDepth) == PsDO(1), "K = 1");
        CodimReport c = symbol_codimensions(W, box, box);
        t.check(c.codim_d == 0 && c.codim_x == 0, "codimensions");
        r.pass = t.pass();
        r.detail = t.summary("staircase to " + std::to_string(deg) + ", box (" + std::to_string(box) + "," +
                             std::to_string(box) + ") dim " + std::to_string(ops.basis.size()));
    });
}

inline CriterionResult verify_cusp_baker(Suite s) {
    return detail::timed(2, "Cusp Baker suite", [s](CriterionResult& r) {
        const detail::Examples ex;
        detail::Tally t;
        t.check(baker_string(compute_baker(ex.cusp)) == "exp(x*z)*(1 - 1/(x*z))", "psi");
        const int cutoff = s == Suite::core ? kDefaultDepth : 2 * kDefaultDepth;
        DiffOp L2 = eigen_operator(ex.cusp, Poly::x().pow(2), cutoff);
        DiffOp L3 = eigen_operator(ex.cusp, Poly::x().pow(3), cutoff);
        t.check(L2 == parse_diffop("D^2 - 2/x^2"), "L_{z^2}");
        t.check(commutator(L2, L3).is_zero(), "[L2, L3]");
        t.check(pow(L3, 2) == pow(L2, 3), "L3^2 = L2^3");
        if (s == Suite::extended) {
            DiffOp L5 = eigen_operator(ex.cusp, Poly::x().pow(5), cutoff);
            t.check(L2 * L3 == L5, "L2 L3 = L5");
        }
        r.pass = t.pass();
        r.detail = t.summary("L2 = " + L2.str() + ", L3 = " + L3.str());
    });
}

inline CriterionResult verify_polynomial_leads(Suite s) {
    return detail::timed(3, "Polynomial leading symbols", [s](CriterionResult& r) {
        const int m = s == Suite::core ? 6 : 7, d = s == Suite::core ? 8 : 10;
        const detail::Examples ex;
        detail::Tally t;
        std::size_t total = 0;
        for (const auto& W : {ex.weyl, ex.cusp, ex.double_cusp, ex.cusp_at_1}) {
            auto box = operator_space_basis(W, W, m, d);
            total += box.basis.size();
            for (const auto& op : box.basis)
                t.check(op.lead().is_polynomial() && principal_symbol(op).is_polynomial(), W.str() + ": " + op.str("z"));
        }
        r.pass = t.pass();
        r.detail = t.summary("boxes (" + std::to_string(m) + "," + std::to_string(d) + "), " + std::to_string(total) +
                             " basis elements");
    });
}

inline CriterionResult verify_codimensions(Suite s) {
    return detail::timed(4, "Symbol codimension equality", [s](CriterionResult& r) {
        const int m = s == Suite::core ? 4 : 6;
        const detail::Examples ex;
        detail::Tally t;
        std::string vals;
        for (const auto& [name, W] : {std::pair{"cusp", ex.cusp}, std::pair{"double cusp", ex.double_cusp}}) {
            CodimReport c = symbol_codimensions(W, m, m);
            t.check(c.equal, std::string(name) + " unequal");
            t.check(c.stable, std::string(name) + " unstable");
            vals += (vals.empty() ? "" : ", ") + std::string(name) + " " + std::to_string(c.codim_d) + "/" +
                    std::to_string(c.codim_x);
        }
        r.pass = t.pass();
        r.detail = t.summary(vals);
    });
}

inline CriterionResult verify_composition(Suite s) {
    return detail::timed(5, "Composition law", [s](CriterionResult& r) {
        const int m = s == Suite::core ? 2 : 3;
        const detail::Examples ex;
        const std::vector<std::pair<std::string, GrPoint>> pts{
            {"C[z]", ex.weyl}, {"cusp", ex.cusp}, {"cusp at 1", ex.cusp_at_1}};
        detail::Tally t;
        int widest = 0;
        for (const auto& [un, U] : pts)
            for (const auto& [vn, V] : pts)
                for (const auto& [wn, W] : pts) {
                    CompositionReport c = composition_check(U, V, W, m, m);
                    t.check(c.products_map_into && c.equal, un + "," + vn + "," + wn);
                    widest = std::max(widest, c.factor_m);
                }
        r.pass = t.pass();
        r.detail = t.summary("target box (" + std::to_string(m) + "," + std::to_string(m) + "), factor boxes up to " +
                             std::to_string(widest));
    });
}

inline CriterionResult verify_gamma_equivariance(Suite s) {
    return detail::timed(6, "Gamma equivariance", [s](CriterionResult& r) {
        const int m = s == Suite::core ? 2 : 3;
        const int pairs = s == Suite::core ? 100 : 300;
        const detail::Examples ex;
        detail::Tally t;
        std::vector<DiffOp> probes;
        for (int i = 0; i <= m; ++i)
            for (int j = 0; j <= m; ++j) probes.push_back(DiffOp::term(RationalFunction::x().pow(i), j));
        for (const auto& W : {ex.cusp, ex.double_cusp})
            for (const Poly& p : {Poly::x().pow(2), Poly::x().pow(3)}) {
                const GrPoint Wm = gamma_act_on_point(W, -p);
                std::vector<DiffOp> cands = operator_space_basis(Wm, Wm, m, m).basis;
                for (const auto& d : operator_space_basis(W, W, m, m).basis) cands.push_back(gamma_conjugate(d, -p));
                cands.insert(cands.end(), probes.begin(), probes.end());
                for (const auto& d : cands)
                    t.check(maps_into(d, Wm, Wm) == maps_into(gamma_conjugate(d, p), W, W),
                            W.str() + ", p = " + p.str("z") + ": " + d.str("z"));
            }
        std::mt19937 rng(20241);
        auto uni = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
        auto small = [&]() -> Scalar {
            Scalar q(uni(-4, 4), uni(1, 3));
            q.canonicalize();
            return q;
        };
        for (int trial = 0; trial < pairs; ++trial) {
            const std::size_t n = static_cast<std::size_t>(uni(1, 4));
            std::vector<Scalar> y, dg;
            while (y.size() < n) {
                Scalar v = small();
                if (std::find(y.begin(), y.end(), v) == y.end()) y.push_back(v);
            }
            for (std::size_t i = 0; i < n; ++i) dg.push_back(small());
            ScalarMatrix lo = identity_matrix(n), up = identity_matrix(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) (i > j ? lo : up)[i][j] = i == j ? Scalar(1) : small();
            CMTriple c = conjugate_cm(cm_from_spectrum(y, dg), mat_mul(lo, up));
            std::vector<Scalar> pc(static_cast<std::size_t>(uni(1, 4)));
            for (auto& v : pc) v = small();
            CMTriple g = gamma_act_cm(c, Poly(pc));
            t.check(rank_one_check(c) && rank_one_check(g), "CM pair " + std::to_string(trial));
        }
        r.pass = t.pass();
        r.detail = t.summary("boxes (" + std::to_string(m) + "," + std::to_string(m) + "), " + std::to_string(pairs) +
                             " CM pairs");
    });
}

inline CriterionResult verify_bispectral(Suite s) {
    return detail::timed(7, "Bispectral involution", [s](CriterionResult& r) {
        const int samples = s == Suite::core ? 20 : 60, box = s == Suite::core ? 2 : 3;
        const detail::Examples ex;
        detail::Tally t;
        t.check(bispectral_dual(ex.cusp) == ex.cusp, "b(cusp)");
        for (const auto& W : {ex.weyl, ex.cusp, ex.double_cusp})
            t.check(bispectral_dual(bispectral_dual(W)) == W, "b(b(" + W.str() + "))");
        const GrPoint bW = bispectral_dual(ex.cusp);
        const auto ops = operator_space_basis(ex.cusp, ex.cusp, box, box).basis;
        std::mt19937 rng(707);
        std::uniform_int_distribution<std::size_t> pick(0, ops.size() - 1);
        for (int i = 0; i < samples; ++i) {
            const DiffOp& a = ops[pick(rng)];
            const DiffOp& b = ops[pick(rng)];
            const DiffOp ba = beta_map(ex.cusp, a), bb = beta_map(ex.cusp, b);
            t.check(beta_map(ex.cusp, a * b) == bb * ba, "beta(" + a.str("z") + " * " + b.str("z") + ")");
            t.check(maps_into(ba, bW, bW), "beta(" + a.str("z") + ") not in D(bW)");
        }
        r.pass = t.pass();
        r.detail = t.summary(std::to_string(samples) + " pairs from the (" + std::to_string(box) + "," +
                             std::to_string(box) + ") box, cutoff " + std::to_string(kDefaultDepth));
    });
}

inline CriterionResult verify_counterexample(Suite s) {
    return detail::timed(8, "Scalar dual subalgebra", [s](CriterionResult& r) {
        const int m = s == Suite::core ? 6 : 8;
        const DiffOp x = DiffOp::x(), D = DiffOp::D();
        auto box = word_algebra_box({x, x * D, Scalar(4) * x * D * D + Scalar(2) * D}, m, m);
        DualSubalgebraBasis b = dual_subalgebra(box);
        r.pass = b.scalars_only && b.basis == std::vector<DiffOp>{DiffOp(1)};
        r.detail = std::to_string(box.size()) + " operators up to order " + std::to_string(m) +
                   (b.scalars_only ? ", x-degree 0 part is the scalars" : ", nonscalar x-degree 0 part");
    });
}

inline CriterionResult verify_schur_root(Suite s) {
    return detail::timed(9, "Square root of second-order operators", [s](CriterionResult& r) {
        const int depth = s == Suite::core ? kDefaultDepth : 2 * kDefaultDepth;
        detail::Tally t;
        for (const char* u : {"x", "1/(x+1)"}) {
            PsDO L(parse_diffop(std::string("D^2 + ") + u));
            PsDO R = psdo_nth_root(L, 2, -depth - 2);
            t.check(psdo_mul(R, R, -depth).agrees_to(L.truncated(-depth), -depth), std::string("square, u = ") + u);
            t.check(psdo_commutator(L, R, -depth).is_zero_to(-depth), std::string("commutator, u = ") + u);
        }
        r.pass = t.pass();
        r.detail = t.summary("depth " + std::to_string(depth));
    });
}

inline CriterionResult verify_lemma_p(Suite s) {
    return detail::timed(10, "Valuation recursion", [s](CriterionResult& r) {
        const int cases = s == Suite::core ? 50 : 200;
        std::mt19937 rng(1013);
        auto uni = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
        detail::Tally t;
        int vanished = 0;
        for (int i = 0; i < cases; ++i) {
            const Scalar lambda(uni(-2, 2));
            const int n = uni(1, 3), rr = uni(0, 2);
            int sv = uni(-3, 3);
            if (sv == 0) sv = 1;
            const RationalFunction a = RationalFunction(Scalar(uni(1, 3))) * RationalFunction::linear_power(lambda, rr);
            const RationalFunction p =
                RationalFunction::linear_power(lambda, sv) *
                (RationalFunction(1) + RationalFunction(Scalar(uni(-2, 2))) * RationalFunction::linear_power(lambda, 1));
            LemmaPReport rep = lemma_p_check(a, n, p, lambda, 6);
            const std::string tag = "a = " + a.str() + ", n = " + std::to_string(n) + ", p = " + p.str();
            t.check(rep.matches_ad, tag + " recursion");
            if (rep.vanishing) {
                ++vanished;
                t.check(rep.identity_holds, tag + " n s = i (n - r)");
            }
        }
        t.check(vanished > 0, "no vanishing case sampled");
        r.pass = t.pass();
        r.detail = t.summary(std::to_string(cases) + " cases, " + std::to_string(vanished) + " with vanishing");
    });
}

/// Time limits in seconds for criteria that carry one.
inline double time_limit(int id) { return id == 1 ? 1.0 : id == 2 ? 5.0 : 0.0; }

inline std::vector<CriterionResult> run_suite(Suite s) {
    std::vector<CriterionResult> out{verify_weyl_baseline(s), verify_cusp_baker(s),        verify_polynomial_leads(s),
                                     verify_codimensions(s),  verify_composition(s),        verify_gamma_equivariance(s),
                                     verify_bispectral(s),    verify_counterexample(s),     verify_schur_root(s),
                                     verify_lemma_p(s)};
    if (s == Suite::core)
        for (auto& r : out)
            if (time_limit(r.id) > 0 && r.seconds >= time_limit(r.id)) {
                r.pass = false;
                r.detail += "; exceeded " + std::to_string(static_cast<int>(time_limit(r.id))) + " s";
            }
    return out;
}

} // namespace fcw
