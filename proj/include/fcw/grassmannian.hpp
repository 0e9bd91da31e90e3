#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fcw/linalg.hpp"

namespace fcw {

/// The functional f -> sum_j jet[j] * f^(j)(lambda).
struct PointCondition {
    Scalar lambda;
    std::vector<Scalar> jet;

    int order() const { return static_cast<int>(jet.size()) - 1; }

    Scalar apply(const Poly& f) const {
        Poly t = f.shifted(lambda);
        Scalar r(0);
        for (int j = 0; j <= order(); ++j)
            if (sgn(jet[static_cast<std::size_t>(j)]) != 0)
                r += jet[static_cast<std::size_t>(j)] * factorial(j) * t.coeff(j);
        return r;
    }

    friend bool operator==(const PointCondition& a, const PointCondition& b) {
        return a.lambda == b.lambda && a.jet == b.jet;
    }
};

/// W = prod (z - lambda)^(-k_lambda) * V, with V the joint kernel in C[z] of
/// finitely many lambda-primary conditions. Conditions are stored row-reduced
/// at each lambda (pivot at the highest jet, normalized to 1); whenever
/// evaluation at lambda lies in their span the factor (z - lambda) is pulled
/// out of V, so equal points have equal representations.
class GrPoint {
public:
    GrPoint() = default;
    explicit GrPoint(const std::vector<PointCondition>& conds) {
        std::map<Scalar, Matrix<Scalar>> rows;
        for (const auto& c : conds) {
            if (c.jet.empty() || std::all_of(c.jet.begin(), c.jet.end(), [](const Scalar& s) { return sgn(s) == 0; }))
                throw DomainError("zero jet functional at " + to_string(c.lambda));
            rows[c.lambda].push_back(c.jet);
        }
        for (auto& [lambda, m] : rows) normalize(lambda, m);
    }

    const std::vector<PointCondition>& conditions() const { return conds_; }
    const std::map<Scalar, int>& multiplicities() const { return k_; }
    int k(const Scalar& lambda) const {
        auto it = k_.find(lambda);
        return it == k_.end() ? 0 : it->second;
    }
    std::vector<Scalar> support() const {
        std::vector<Scalar> s;
        for (const auto& kv : k_) s.push_back(kv.first);
        return s;
    }
    int total_k() const {
        int t = 0;
        for (const auto& kv : k_) t += kv.second;
        return t;
    }
    /// N_lambda: (z - lambda)^N C[z] lies in V near lambda; 0 off the support.
    int primary_order(const Scalar& lambda) const {
        int n = 0;
        for (const auto& c : conds_)
            if (c.lambda == lambda) n = std::max(n, c.order() + 1);
        return n;
    }
    /// prod (z - lambda)^k_lambda
    Poly q() const {
        Poly p(1);
        for (const auto& [l, k] : k_) p *= Poly::linear_power(l, k);
        return p;
    }
    /// prod (z - lambda)^N_lambda, a multiple of which lies in V.
    Poly primary_poly() const {
        Poly p(1);
        for (const auto& l : support()) p *= Poly::linear_power(l, primary_order(l));
        return p;
    }
    bool satisfies(const Poly& f) const {
        for (const auto& c : conds_)
            if (sgn(c.apply(f)) != 0) return false;
        return true;
    }

    friend bool operator==(const GrPoint& a, const GrPoint& b) { return a.conds_ == b.conds_ && a.k_ == b.k_; }
    friend bool operator!=(const GrPoint& a, const GrPoint& b) { return !(a == b); }

    std::string str(const std::string& var = "z") const;

private:
    void normalize(const Scalar& lambda, Matrix<Scalar> m) {
        for (;;) {
            std::size_t width = 0;
            for (const auto& r : m) width = std::max(width, r.size());
            for (auto& r : m) r.resize(width, Scalar(0));
            std::vector<std::size_t> order(width);
            for (std::size_t i = 0; i < width; ++i) order[i] = width - 1 - i;
            Echelon<Scalar> e = rref(m, order);
            auto ev = std::find(e.pivots.begin(), e.pivots.end(), std::size_t{0});
            if (ev == e.pivots.end()) {
                for (std::size_t r = 0; r < e.rows.size(); ++r) {
                    auto jet = e.rows[r];
                    jet.resize(e.pivots[r] + 1);
                    conds_.push_back({lambda, std::move(jet)});
                }
                if (!e.rows.empty()) k_[lambda] = static_cast<int>(e.rows.size());
                std::sort(conds_.begin(), conds_.end(), [](const PointCondition& a, const PointCondition& b) {
                    return a.lambda != b.lambda ? a.lambda < b.lambda : a.order() < b.order();
                });
                return;
            }
            // V lies in (z - lambda)C[z]; for f = (z - lambda)g,
            // f^(j)(lambda) = j g^(j-1)(lambda)
            Matrix<Scalar> next;
            for (std::size_t r = 0; r < e.rows.size(); ++r) {
                if (e.pivots[r] == 0) continue;
                Vec<Scalar> row(width - 1, Scalar(0));
                for (std::size_t j = 1; j < width; ++j) row[j - 1] = e.rows[r][j] * Scalar(static_cast<long>(j));
                next.push_back(std::move(row));
            }
            m = std::move(next);
            if (m.empty()) return;
        }
    }

    std::vector<PointCondition> conds_;
    std::map<Scalar, int> k_;
};

inline std::string GrPoint::str(const std::string& var) const {
    if (conds_.empty()) return "C[" + var + "]";
    std::string out;
    for (const auto& c : conds_) {
        std::string term;
        for (int j = c.order(); j >= 0; --j) {
            const Scalar& v = c.jet[static_cast<std::size_t>(j)];
            if (sgn(v) == 0) continue;
            std::string body = "f" + std::string(static_cast<std::size_t>(j), '\'') + "(" + to_string(c.lambda) + ")";
            detail::append_term(term, sgn(v) < 0, (abs(v) == 1 ? "" : to_string(abs(v)) + "*") + body);
        }
        out += (out.empty() ? "" : ", ") + term + " = 0";
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const GrPoint& w) { return os << w.str(); }

/// h lies in W iff q*h is a polynomial killed by every condition.
inline bool membership(const GrPoint& W, const RationalFunction& h) {
    RationalFunction g = RationalFunction(W.q()) * h;
    if (!g.is_polynomial()) return false;
    return W.satisfies(g.num());
}

/// Polynomials of degree <= deg satisfying the conditions, echelon by top
/// degree (each has its own top degree, reduced against the others).
inline std::vector<Poly> condition_kernel(const GrPoint& W, int deg) {
    if (deg < 0) return {};
    const std::size_t n = static_cast<std::size_t>(deg) + 1;
    Matrix<Scalar> m;
    for (const auto& c : W.conditions()) {
        Vec<Scalar> row(n);
        for (std::size_t t = 0; t < n; ++t) row[t] = c.apply(Poly::monomial(Scalar(1), static_cast<int>(t)));
        m.push_back(std::move(row));
    }
    Matrix<Scalar> ker = nullspace(m, n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = n - 1 - i;
    Echelon<Scalar> e = rref(std::move(ker), order);
    std::vector<Poly> out;
    for (auto it = e.rows.rbegin(); it != e.rows.rend(); ++it) out.emplace_back(*it);
    return out;
}

/// Basis of the elements of W of z-degree <= d, i.e. g/q with deg g <= d + sum k.
inline std::vector<RationalFunction> basis_up_to_degree(const GrPoint& W, int d) {
    if (d < 0) throw DomainError("degree bound must be nonnegative");
    const Poly q = W.q();
    std::vector<RationalFunction> out;
    for (const auto& g : condition_kernel(W, d + W.total_k())) out.emplace_back(g, q);
    return out;
}

struct SpectralAlgebra {
    int bound = 0;
    std::vector<int> staircase;  // attained degrees, ascending
    std::vector<Poly> basis;     // one element per staircase degree
};

/// Polynomials f of degree <= d with fW in W. Since fV lies in V for any f once
/// V contains primary_poly()*C[z], it suffices to test V below that degree.
inline SpectralAlgebra spectral_algebra(const GrPoint& W, int d) {
    if (d < 0) throw DomainError("degree bound must be nonnegative");
    const std::size_t n = static_cast<std::size_t>(d) + 1;
    const std::vector<Poly> window = condition_kernel(W, W.primary_poly().degree() - 1);
    Matrix<Scalar> m;
    for (const auto& v : window)
        for (const auto& c : W.conditions()) {
            Vec<Scalar> row(n);
            for (std::size_t t = 0; t < n; ++t) row[t] = c.apply(Poly::monomial(Scalar(1), static_cast<int>(t)) * v);
            m.push_back(std::move(row));
        }
    Matrix<Scalar> ker = nullspace(m, n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = n - 1 - i;
    Echelon<Scalar> e = rref(std::move(ker), order);
    SpectralAlgebra a;
    a.bound = d;
    for (auto it = e.rows.rbegin(); it != e.rows.rend(); ++it) {
        a.basis.emplace_back(*it);
        a.staircase.push_back(a.basis.back().degree());
    }
    return a;
}

/// True when f W lies in W (same window argument as spectral_algebra).
inline bool in_spectral_algebra(const GrPoint& W, const Poly& f) {
    for (const auto& v : condition_kernel(W, W.primary_poly().degree() - 1))
        if (!W.satisfies(f * v)) return false;
    return true;
}

/// Taylor coefficients at lambda of exp(-(p(z) - p(lambda))) up to (z - lambda)^m.
/// The constant factor exp(-p(lambda)) is dropped; it does not change kernels.
inline std::vector<Scalar> exp_neg_taylor(const Poly& p, const Scalar& lambda, int m) {
    Poly u = p.shifted(lambda);
    std::vector<Scalar> uc(static_cast<std::size_t>(m) + 1, Scalar(0));
    for (int i = 1; i <= m; ++i) uc[static_cast<std::size_t>(i)] = -u.coeff(i);
    // E' = u' E as power series
    std::vector<Scalar> e(static_cast<std::size_t>(m) + 1, Scalar(0));
    e[0] = 1;
    for (int n = 1; n <= m; ++n) {
        Scalar s(0);
        for (int i = 1; i <= n; ++i) s += Scalar(i) * uc[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(n - i)];
        e[static_cast<std::size_t>(n)] = s / Scalar(n);
    }
    return e;
}

/// gamma_p W = e^p W: each condition c becomes f -> c(e^{-p} f), expanded on jets.
inline GrPoint gamma_act_on_point(const GrPoint& W, const Poly& p) {
    std::vector<PointCondition> out;
    for (const auto& c : W.conditions()) {
        const int m = c.order();
        auto e = exp_neg_taylor(p, c.lambda, m);
        // (E f)^(j)(l) = sum_i C(j,i) E^(j-i)(l) f^(i)(l), E^(t)(l) = t! e_t
        std::vector<Scalar> jet(static_cast<std::size_t>(m) + 1, Scalar(0));
        for (int j = 0; j <= m; ++j)
            for (int i = 0; i <= j; ++i)
                jet[static_cast<std::size_t>(i)] += c.jet[static_cast<std::size_t>(j)] * binomial(j, i) *
                                                    factorial(j - i) * e[static_cast<std::size_t>(j - i)];
        out.push_back({c.lambda, std::move(jet)});
    }
    return GrPoint(out);
}

} // namespace fcw
