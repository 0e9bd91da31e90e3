#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fcw/operator_space.hpp"
#include "fcw/psdo.hpp"

namespace fcw {

/// psi = e^{xz} (1 + sum_i f_i(x) (z - lambda_i)^(-j_i)).
struct BakerData {
    std::vector<std::pair<Scalar, int>> g;  // (lambda, j), 1 <= j <= k_lambda
    std::vector<RationalFunction> f;

    /// 1 + sum f_i g_i at a fixed z (not a pole), as a function of x.
    RationalFunction correction_at(const Scalar& z) const {
        RationalFunction r(1);
        for (std::size_t i = 0; i < g.size(); ++i)
            r += f[i] * RationalFunction(scalar_pow(z - g[i].first, -g[i].second));
        return r;
    }
};

namespace detail {

/// Row of condition c applied to e^{xz} q(z) (1 + sum f_i g_i(z)) at its
/// point, with e^{x lambda} dropped: returns (coefficients of f_i, constant).
inline std::pair<Vec<RationalFunction>, RationalFunction> baker_condition_row(
    const PointCondition& c, const Poly& q, const std::vector<std::pair<Scalar, int>>& g) {
    // h_0 = q, h_i = q (z - l_i)^(-j_i), all polynomials
    std::vector<Poly> h{q};
    for (const auto& [l, j] : g) h.push_back(q.divmod(Poly::linear_power(l, j)).first);
    std::vector<RationalFunction> vals(h.size());
    const RationalFunction x = RationalFunction::x();
    for (std::size_t u = 0; u < h.size(); ++u) {
        Poly t = h[u].shifted(c.lambda);
        // d^j/dz^j (e^{xz} h) at lambda = sum_t C(j,t) x^(j-t) h^(t)(lambda)
        for (int j = 0; j <= c.order(); ++j) {
            const Scalar& cj = c.jet[static_cast<std::size_t>(j)];
            if (sgn(cj) == 0) continue;
            for (int s = 0; s <= j; ++s) {
                Scalar ht = factorial(s) * t.coeff(s);
                if (sgn(ht) == 0) continue;
                vals[u] += RationalFunction(cj * binomial(j, s) * ht) * x.pow(j - s);
            }
        }
    }
    Vec<RationalFunction> row(vals.begin() + 1, vals.end());
    return {row, vals[0]};
}

} // namespace detail

inline BakerData compute_baker(const GrPoint& W) {
    BakerData b;
    for (const auto& [l, k] : W.multiplicities())
        for (int j = 1; j <= k; ++j) b.g.emplace_back(l, j);
    if (b.g.empty()) return b;
    const Poly q = W.q();
    Matrix<RationalFunction> m;
    Vec<RationalFunction> rhs;
    for (const auto& c : W.conditions()) {
        auto [row, constant] = detail::baker_condition_row(c, q, b.g);
        m.push_back(std::move(row));
        rhs.push_back(-constant);
    }
    auto sol = solve_unique(m, rhs);
    if (!sol) {
        std::string rows;
        for (const auto& r : m) {
            rows += rows.empty() ? "[" : ", [";
            for (std::size_t i = 0; i < r.size(); ++i) rows += (i ? ", " : "") + r[i].str();
            rows += "]";
        }
        throw DomainError("degenerate Baker system: " + rows);
    }
    b.f = std::move(*sol);
    for (const auto& c : W.conditions()) {
        auto [row, constant] = detail::baker_condition_row(c, q, b.g);
        RationalFunction v = constant;
        for (std::size_t i = 0; i < row.size(); ++i) v += row[i] * b.f[i];
        if (!v.is_zero()) throw ConsistencyError("Baker function fails a condition after solving");
    }
    for (const auto& f : b.f)
        if (!f.is_zero() && f.deg_x() >= 0) throw ConsistencyError("Baker coefficient does not vanish at infinity: " + f.str());
    return b;
}

/// a_i with e^{-xz} psi = 1 + sum_i a_i(x) z^(-i), i = 1..n.
inline std::vector<RationalFunction> expansion_coefficients(const BakerData& b, int n) {
    std::vector<RationalFunction> a(static_cast<std::size_t>(std::max(n, 0)));
    // (z - l)^(-j) = sum_{i >= j} C(i-1, j-1) l^(i-j) z^(-i)
    for (std::size_t u = 0; u < b.g.size(); ++u) {
        const auto& [l, j] = b.g[u];
        for (int i = j; i <= n; ++i)
            a[static_cast<std::size_t>(i - 1)] += RationalFunction(binomial(i - 1, j - 1) * scalar_pow(l, i - j)) * b.f[u];
    }
    return a;
}

/// Renders psi as exp(x*z)*(1 - 1/(x*z)).
inline std::string baker_string(const BakerData& b) {
    if (b.g.empty()) return "exp(x*z)";
    auto factor = [](const Poly& p, const std::string& var) {
        std::string s = p.str(var);
        bool monomial = true;
        for (int i = 0; i < p.degree(); ++i)
            if (sgn(p.coeff(i)) != 0) monomial = false;
        return monomial && p.lead() == 1 ? s : "(" + s + ")";
    };
    std::string out = "1";
    for (std::size_t u = 0; u < b.g.size(); ++u) {
        const RationalFunction& f = b.f[u];
        if (f.is_zero()) continue;
        const auto& [l, j] = b.g[u];
        std::vector<std::string> den;
        if (f.den().degree() > 0) den.push_back(factor(f.den(), "x"));
        Poly zl = Poly::linear_power(l, 1);
        std::string zf = factor(zl, "z");
        den.push_back(j == 1 ? zf : zf + "^" + std::to_string(j));
        std::string dens;
        for (std::size_t i = 0; i < den.size(); ++i) dens += (i ? "*" : "") + den[i];
        if (den.size() > 1) dens = "(" + dens + ")";
        const Poly& n = f.num();
        bool neg = false;
        std::string num;
        if (n.degree() == 0) {
            neg = sgn(n.coeff(0)) < 0;
            num = to_string(abs(n.coeff(0)));
        } else {
            num = factor(n, "x");
        }
        detail::append_term(out, neg, num + "/" + dens);
    }
    return "exp(x*z)*(" + out + ")";
}

/// K_W = 1 + sum f_i(x) g_i(D); exact when every g_i is a power of 1/z.
inline PsDO wave_operator(const BakerData& b, int cutoff) {
    bool exact = true;
    for (const auto& [l, j] : b.g)
        if (sgn(l) != 0) exact = false;
    std::map<int, RationalFunction> t{{0, RationalFunction(1)}};
    for (std::size_t u = 0; u < b.g.size(); ++u) {
        const auto& [l, j] = b.g[u];
        PsDO s = expand_rational_in_inverse_derivation(RationalFunction::linear_power(l, -j), exact ? -j : cutoff);
        for (const auto& [p, c] : s.terms()) t[p] += b.f[u] * c;
    }
    return PsDO(std::move(t), exact ? kExact : cutoff);
}

inline PsDO wave_operator(const GrPoint& W, int cutoff) { return wave_operator(compute_baker(W), cutoff); }

namespace detail {

inline DiffOp differential_part_checked(const PsDO& p, int cutoff, const std::string& what) {
    auto [d, neg] = psdo_decompose(p);
    if (!neg.is_zero_to(cutoff)) throw ConsistencyError(what + " has a nonzero negative part: " + neg.str());
    return d;
}

/// a(D) for a rational a, as a series to the floor.
inline PsDO constant_coefficient_series(const RationalFunction& a, int floor) {
    auto [poly, rest] = a.num().divmod(a.den());
    std::vector<RationalFunction> pc;
    for (const auto& c : poly.coeffs()) pc.emplace_back(c);
    PsDO out(DiffOp(std::move(pc)));
    if (!rest.is_zero()) {
        bool exact = a.den().degree() == multiplicity(a.den(), Scalar(0));
        PsDO tail = expand_rational_in_inverse_derivation(RationalFunction(rest, a.den()),
                                                          exact ? std::min(floor, -a.den().degree()) : floor);
        if (exact) tail = PsDO(tail.terms(), kExact);
        out = out + tail;
    }
    return out;
}

} // namespace detail

/// L_f = differential part of K f(D) K^-1, for f in A_W.
inline DiffOp eigen_operator(const GrPoint& W, const Poly& f, int cutoff = kDefaultDepth) {
    if (!in_spectral_algebra(W, f)) throw DomainError("f = " + f.str("z") + " is not in the spectral algebra");
    const int n = f.degree();
    PsDO K = wave_operator(W, -cutoff - n - 1);
    std::vector<RationalFunction> fc;
    for (const auto& c : f.coeffs()) fc.emplace_back(c);
    PsDO L = psdo_conjugate(K, PsDO(DiffOp(std::move(fc))), -cutoff);
    return detail::differential_part_checked(L, -cutoff, "K f(D) K^-1");
}

/// b(D): z -> D, D_z -> x, reversing products.
inline PsDO bispectral_image(const DiffOp& D, int floor) {
    PsDO out({}, kExact);
    for (int j = 0; j <= D.order(); ++j) {
        const RationalFunction& a = D.coeffs()[static_cast<std::size_t>(j)];
        if (a.is_zero()) continue;
        out = out + RationalFunction::x().pow(j) * detail::constant_coefficient_series(a, floor);
    }
    return out;
}

/// Theta = K b(D) K^-1, for D in D(W).
inline DiffOp beta_map(const GrPoint& W, const DiffOp& D, int cutoff = kDefaultDepth) {
    if (!maps_into(D, W, W)) throw DomainError("operator does not preserve W: " + D.str("z"));
    if (D.is_zero()) return DiffOp();
    const int n = D.deg_x();
    const int depth = -cutoff - std::max(n, 0) - 1;
    PsDO K = wave_operator(W, depth);
    PsDO bD = bispectral_image(D, depth);
    PsDO theta = psdo_conjugate(K, bD, -cutoff);
    return detail::differential_part_checked(theta, -cutoff, "K b(D) K^-1");
}

/// The point whose Baker function is psi_W(z, x).
inline GrPoint bispectral_dual(const GrPoint& W) {
    const BakerData b = compute_baker(W);
    if (b.g.empty()) return GrPoint();
    // psi^T = e^{xz} (1 + sum f_i(z) g_i(x)) = e^{xz} R(x, z) / P(z)
    Poly P(1);
    for (const auto& f : b.f)
        if (!f.is_zero()) P = (P * f.den()).divmod(gcd(P, f.den())).first.monic();
    if (P.degree() == 0) return GrPoint();
    // R as a polynomial in z with coefficients in Q(x): P + sum (P f_i)(z) g_i(x)
    std::vector<RationalFunction> R(static_cast<std::size_t>(P.degree()) + 1);
    for (int t = 0; t <= P.degree(); ++t) R[static_cast<std::size_t>(t)] = RationalFunction(P.coeff(t));
    for (std::size_t u = 0; u < b.f.size(); ++u) {
        if (b.f[u].is_zero()) continue;
        Poly pf = b.f[u].num() * P.divmod(b.f[u].den()).first;
        RationalFunction gx = RationalFunction::linear_power(b.g[u].first, -b.g[u].second);
        for (int t = 0; t <= pf.degree(); ++t) R[static_cast<std::size_t>(t)] += RationalFunction(pf.coeff(t)) * gx;
    }
    const RationalFunction x = RationalFunction::x();
    std::vector<PointCondition> conds;
    const std::vector<Scalar> roots = rational_roots(P);
    {
        Poly split(1);
        for (const auto& l : roots) split *= Poly::linear_power(l, multiplicity(P, l));
        if (split != P) throw DomainError("bispectral dual has poles off the rationals: " + P.str("z"));
    }
    for (const auto& mu : roots) {
        const int k = multiplicity(P, mu);
        // Taylor coefficients of R at mu, as functions of x
        std::vector<RationalFunction> Rt(R.size());
        for (std::size_t t = 0; t < R.size(); ++t) {
            // z^t = sum_i C(t,i) mu^(t-i) (z - mu)^i
            for (std::size_t i = 0; i <= t; ++i)
                Rt[i] += RationalFunction(binomial(static_cast<int>(t), static_cast<int>(i)) *
                                          scalar_pow(mu, static_cast<long>(t - i))) *
                         R[t];
        }
        for (int N = k;; ++N) {
            if (N > k + static_cast<int>(R.size()) + 8) throw DomainError("bispectral dual: no conditions found at " + to_string(mu));
            // value of jet j: sum_s C(j,s) x^(j-s) s! Rt[s]
            std::vector<RationalFunction> jets;
            for (int j = 0; j < N; ++j) {
                RationalFunction v;
                for (int s = 0; s <= j && s < static_cast<int>(Rt.size()); ++s)
                    v += RationalFunction(binomial(j, s) * factorial(s)) * x.pow(j - s) * Rt[static_cast<std::size_t>(s)];
                jets.push_back(v);
            }
            // sum_j c_j jets[j] = 0 in Q(x): clear denominators, equate x-coefficients
            Poly common(1);
            for (const auto& v : jets)
                if (!v.is_zero()) common = (common * v.den()).divmod(gcd(common, v.den())).first.monic();
            std::vector<Poly> nums;
            int maxdeg = 0;
            for (const auto& v : jets) {
                Poly p = v.is_zero() ? Poly() : v.num() * common.divmod(v.den()).first;
                maxdeg = std::max(maxdeg, p.degree());
                nums.push_back(p);
            }
            Matrix<Scalar> rows;
            for (int e = 0; e <= maxdeg; ++e) {
                Vec<Scalar> row;
                for (const auto& p : nums) row.push_back(p.coeff(e));
                rows.push_back(std::move(row));
            }
            Matrix<Scalar> ker = nullspace(rows, static_cast<std::size_t>(N));
            if (static_cast<int>(ker.size()) >= k) {
                for (auto& c : ker) conds.push_back({mu, c});
                break;
            }
        }
    }
    GrPoint dual(conds);
    // verify psi_dual(x, z) = psi_W(z, x): both are rational in z and vanish at
    // infinity after subtracting 1, so enough z-expansion terms decide it
    const BakerData bd = compute_baker(dual);
    int n = 0;
    for (const auto& f : b.f) n += f.is_zero() ? 0 : f.den().degree();
    n += static_cast<int>(bd.g.size()) + static_cast<int>(b.g.size()) + 1;
    // coefficient of z^-i in sum f_u(z) g_u(x)
    std::vector<RationalFunction> lhs = expansion_coefficients(bd, n), rhs(static_cast<std::size_t>(n));
    for (std::size_t u = 0; u < b.f.size(); ++u) {
        if (b.f[u].is_zero()) continue;
        PsDO s = expand_rational_in_inverse_derivation(b.f[u], -n);
        RationalFunction gx = RationalFunction::linear_power(b.g[u].first, -b.g[u].second);
        for (const auto& [p, c] : s.terms()) rhs[static_cast<std::size_t>(-p - 1)] += c * gx;
    }
    if (lhs != rhs) throw DomainError("transposed Baker function is not realized by a point");
    return dual;
}

} // namespace fcw
