#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "fcw/diffop.hpp"

namespace fcw {

/// Lowest trusted power of an exact (untruncated) series.
inline constexpr int kExact = INT_MIN / 4;

/// Default number of powers of D^-1 kept below what a caller asks for.
inline constexpr int kDefaultDepth = 8;

/// Truncated formal series sum_{i <= n} a_i(x) D^i. Every coefficient at a
/// power >= floor() is exact; anything below is unknown and not stored.
class PsDO {
public:
    PsDO() = default;
    PsDO(const DiffOp& d) {
        for (int i = 0; i <= d.order(); ++i)
            if (!d.coeff(i).is_zero()) t_[i] = d.coeff(i);
    }
    PsDO(const Scalar& c) : PsDO(DiffOp(c)) {}
    PsDO(long c) : PsDO(DiffOp(c)) {}
    PsDO(std::map<int, RationalFunction> terms, int floor) : t_(std::move(terms)), floor_(floor) { trim(); }

    static PsDO term(RationalFunction f, int power) {
        std::map<int, RationalFunction> t;
        t[power] = std::move(f);
        return PsDO(std::move(t), kExact);
    }
    static PsDO D(int power = 1) { return term(RationalFunction(1), power); }

    bool is_zero() const { return t_.empty(); }
    bool is_exact() const { return floor_ == kExact; }
    int floor() const { return floor_; }
    /// Highest power present; kNegInfDegree for zero.
    int order() const { return t_.empty() ? kNegInfDegree : t_.rbegin()->first; }
    RationalFunction lead() const { return t_.empty() ? RationalFunction() : t_.rbegin()->second; }
    int lowest_power() const { return t_.empty() ? kNegInfDegree : t_.begin()->first; }
    const std::map<int, RationalFunction>& terms() const { return t_; }
    RationalFunction coeff(int power) const {
        auto it = t_.find(power);
        return it == t_.end() ? RationalFunction() : it->second;
    }

    PsDO truncated(int floor) const {
        PsDO r = *this;
        r.floor_ = std::max(floor_, floor);
        r.trim();
        return r;
    }

    /// True when every power >= `power` is known and equal in both.
    bool agrees_to(const PsDO& o, int power) const {
        if (power < floor_ || power < o.floor_) return false;
        for (const auto& [k, f] : t_)
            if (k >= power && o.coeff(k) != f) return false;
        for (const auto& [k, f] : o.t_)
            if (k >= power && coeff(k) != f) return false;
        return true;
    }
    bool is_zero_to(int power) const { return agrees_to(PsDO(), power); }

    friend PsDO operator+(const PsDO& a, const PsDO& b) {
        PsDO r = a;
        for (const auto& [k, f] : b.t_) r.t_[k] += f;
        r.floor_ = std::max(a.floor_, b.floor_);
        r.trim();
        return r;
    }
    friend PsDO operator-(const PsDO& a) {
        PsDO r = a;
        for (auto& kv : r.t_) kv.second = -kv.second;
        return r;
    }
    friend PsDO operator-(const PsDO& a, const PsDO& b) { return a + (-b); }
    friend PsDO operator*(const RationalFunction& f, const PsDO& a) {
        PsDO r = a;
        for (auto& kv : r.t_) kv.second = f * kv.second;
        r.trim();
        return r;
    }
    friend bool operator==(const PsDO& a, const PsDO& b) { return a.floor_ == b.floor_ && a.t_ == b.t_; }

    std::string str(const std::string& var = "x", const std::string& dsym = "D") const;

private:
    void trim() {
        for (auto it = t_.begin(); it != t_.end();) {
            if (it->second.is_zero() || it->first < floor_) it = t_.erase(it);
            else ++it;
        }
    }

    std::map<int, RationalFunction> t_;
    int floor_ = kExact;
};

/// Lowest power at which a*b is determined by the known parts of a and b,
/// or kExact when both are exact.
inline int product_floor(const PsDO& a, const PsDO& b) {
    if (a.is_zero() || b.is_zero()) return std::max(a.floor(), b.floor());
    int f = kExact;
    if (!a.is_exact()) f = std::max(f, a.floor() + b.order());
    if (!b.is_exact()) f = std::max(f, a.order() + b.floor());
    return f;
}

/// a*b in every power >= cutoff, using D^i f = sum_k C(i,k) f^(k) D^(i-k),
/// which for negative i is the expansion of D^-1 f.
inline PsDO psdo_mul(const PsDO& a, const PsDO& b, int cutoff) {
    const int need = product_floor(a, b);
    if (need > cutoff)
        throw DomainError("product is only determined down to D^" + std::to_string(need) +
                          ", requested D^" + std::to_string(cutoff));
    const bool finite = a.is_exact() && b.is_exact() && a.lowest_power() >= 0;
    if (!finite && cutoff == kExact) throw DomainError("infinite product needs a cutoff");
    if (a.is_zero() || b.is_zero()) return PsDO({}, cutoff);
    std::map<int, RationalFunction> r;
    std::map<int, std::vector<RationalFunction>> derivs;
    for (const auto& [i, ai] : a.terms()) {
        for (const auto& [j, bj] : b.terms()) {
            const int top = i + j;
            if (top < cutoff) continue;
            const int kmax = i >= 0 ? std::min(i, top - cutoff) : top - cutoff;
            auto& ds = derivs[j];
            if (ds.empty()) ds.push_back(bj);
            while (static_cast<int>(ds.size()) <= kmax) ds.push_back(ds.back().derivative());
            for (int k = 0; k <= kmax; ++k) {
                const auto& d = ds[static_cast<std::size_t>(k)];
                if (d.is_zero()) break;
                r[top - k] += binomial(i, k) * (ai * d);
            }
        }
    }
    return PsDO(std::move(r), cutoff);
}

/// Product to its natural validity window; exact series with negative
/// powers are multiplied kDefaultDepth powers below their lowest terms.
inline PsDO operator*(const PsDO& a, const PsDO& b) {
    int f = product_floor(a, b);
    if (f == kExact) {
        if (a.is_zero() || b.is_zero()) return PsDO();
        if (a.lowest_power() >= 0 && b.lowest_power() >= 0) return psdo_mul(a, b, kExact);
        f = a.lowest_power() + b.lowest_power() - kDefaultDepth;
    }
    return psdo_mul(a, b, f);
}

inline PsDO psdo_commutator(const PsDO& a, const PsDO& b, int cutoff) {
    return psdo_mul(a, b, cutoff) - psdo_mul(b, a, cutoff);
}

/// Two-sided inverse to the cutoff, solved term by term from the top.
inline PsDO psdo_invert(const PsDO& a, int cutoff) {
    if (a.is_zero()) throw DomainError("the zero operator is not invertible");
    const int n = a.order();
    if (!a.is_exact() && a.floor() - 2 * n > cutoff)
        throw DomainError("inverse is only determined down to D^" + std::to_string(a.floor() - 2 * n) +
                          ", requested D^" + std::to_string(cutoff));
    const RationalFunction inv_lead = a.lead().inverse();
    std::map<int, RationalFunction> b;
    std::map<int, std::vector<RationalFunction>> derivs;
    auto deriv = [&](int j, int k) -> const RationalFunction& {
        auto& ds = derivs[j];
        if (ds.empty()) ds.push_back(b.at(j));
        while (static_cast<int>(ds.size()) <= k) ds.push_back(ds.back().derivative());
        return ds[static_cast<std::size_t>(k)];
    };
    // the power -m coefficient of a*b involves b_{-n-m} only through lead(a)
    for (int m = 0; -n - m >= cutoff; ++m) {
        RationalFunction acc = m == 0 ? RationalFunction(1) : RationalFunction();
        for (const auto& [i, ai] : a.terms()) {
            for (const auto& kv : b) {
                const int k = i + kv.first + m;
                if (k < 0 || (i >= 0 && k > i)) continue;
                const RationalFunction& d = deriv(kv.first, k);
                if (!d.is_zero()) acc -= binomial(i, k) * (ai * d);
            }
        }
        if (!acc.is_zero()) b[-n - m] = inv_lead * acc;
    }
    return PsDO(std::move(b), cutoff);
}

/// a^k to the cutoff (negative k through the inverse). Intermediate powers
/// are kept deep enough that each product stays determined.
inline PsDO psdo_pow(const PsDO& a, int k, int cutoff) {
    if (k == 0) return PsDO(1);
    if (a.is_zero()) return PsDO({}, cutoff);
    const int m = k > 0 ? a.order() : -a.order();
    const int steps = std::abs(k);
    const int slack = std::max(0, (steps - 1) * m);
    PsDO base = k > 0 ? a : psdo_invert(a, cutoff - slack);
    PsDO acc = base.truncated(cutoff - slack);
    for (int s = 2; s <= steps; ++s) acc = psdo_mul(acc, base, cutoff - std::max(0, (steps - s) * m));
    return acc.truncated(cutoff);
}

/// R with leading term D and R^n = L to the cutoff, for L = D^n + lower.
inline PsDO psdo_nth_root(const PsDO& L, int n, int cutoff) {
    if (n < 1) throw DomainError("root index must be positive");
    if (L.order() != n || L.lead() != RationalFunction(1))
        throw DomainError("nth root needs leading term D^" + std::to_string(n) + ", got " +
                          (L.is_zero() ? std::string("0") : L.lead().str() + "*D^" + std::to_string(L.order())));
    if (!L.is_exact() && L.floor() - n + 1 > cutoff)
        throw DomainError("root is only determined down to D^" + std::to_string(L.floor() - n + 1) +
                          ", requested D^" + std::to_string(cutoff));
    std::map<int, RationalFunction> r;
    r[1] = RationalFunction(1);
    // coefficient of D^(n-1-m) in R^n is n*rho_{-m} + terms in earlier rho
    for (int m = 0; -m >= cutoff; ++m) {
        const int target = n - 1 - m;
        PsDO P = psdo_pow(PsDO(r, kExact), n, target);
        RationalFunction rho = L.coeff(target) - P.coeff(target);
        if (!rho.is_zero()) r[-m] = Scalar(1, n) * rho;
    }
    return PsDO(std::move(r), cutoff);
}

/// Split into the differential part (powers >= 0) and the strictly negative part.
inline std::pair<DiffOp, PsDO> psdo_decompose(const PsDO& a) {
    if (a.floor() > 0)
        throw DomainError("differential part unknown below D^" + std::to_string(a.floor()));
    std::vector<RationalFunction> pos;
    std::map<int, RationalFunction> neg;
    for (const auto& [k, f] : a.terms()) {
        if (k >= 0) {
            if (static_cast<int>(pos.size()) <= k) pos.resize(static_cast<std::size_t>(k) + 1);
            pos[static_cast<std::size_t>(k)] = f;
        } else {
            neg[k] = f;
        }
    }
    return {DiffOp(std::move(pos)), PsDO(std::move(neg), a.floor())};
}

/// g(D) as a series in D^-1: the expansion of g at infinity, since the
/// coefficients are constants and commute with D.
inline PsDO expand_rational_in_inverse_derivation(const RationalFunction& g, int cutoff) {
    if (g.is_zero()) return PsDO({}, cutoff);
    if (g.deg_x() >= 0) throw DomainError("g must vanish at infinity, got " + g.str("z"));
    // g(1/w) = w^(dd-dn) * rev(num)(w) / rev(den)(w)
    auto reversed = [](const Poly& p) {
        std::vector<Scalar> c(p.coeffs().rbegin(), p.coeffs().rend());
        return Poly(std::move(c));
    };
    const int shift = -g.deg_x();
    const int terms = shift - cutoff + 1;
    std::map<int, RationalFunction> t;
    if (terms > 0) {
        auto s = series_divide(reversed(g.num()), reversed(g.den()), terms);
        for (int i = 0; i < terms; ++i)
            if (sgn(s[static_cast<std::size_t>(i)]) != 0) t[-(shift + i)] = RationalFunction(s[static_cast<std::size_t>(i)]);
    }
    return PsDO(std::move(t), cutoff);
}

/// K*D*K^-1 to the cutoff.
inline PsDO psdo_conjugate(const PsDO& K, const PsDO& D, int cutoff) {
    if (K.is_zero()) throw DomainError("conjugation by the zero operator");
    if (D.is_zero()) return PsDO({}, cutoff);
    const int nK = K.order(), nD = D.order();
    PsDO Kinv = psdo_invert(K, cutoff - nK - nD);
    PsDO KD = psdo_mul(K, D, cutoff + nK);
    return psdo_mul(KD, Kinv, cutoff);
}

/// Order-zero P = p + p_1 D^-1 + ... with [P, L] = 0 to the cutoff, for L of
/// order zero with nonconstant leading coefficient; each p_m is forced by the
/// D^(-m-1) coefficient of the commutator.
inline PsDO centralizer_order_zero(const PsDO& L, const RationalFunction& p, int cutoff) {
    if (L.order() != 0) throw DomainError("expected an order-zero series");
    const RationalFunction da = L.lead().derivative();
    if (da.is_zero()) throw DomainError("leading coefficient is constant");
    std::map<int, RationalFunction> t;
    if (!p.is_zero()) t[0] = p;
    for (int m = 1; -m >= cutoff; ++m) {
        // [p_m D^-m, a] has leading term -m a' p_m D^(-m-1)
        PsDO c = psdo_commutator(PsDO(t, kExact), L, -m - 1);
        RationalFunction pm = c.coeff(-m - 1) / (Scalar(m) * da);
        if (!pm.is_zero()) t[-m] = pm;
    }
    return PsDO(std::move(t), cutoff);
}

/// Constants c_k with P = sum_k c_k R^k to the cutoff, where R has leading
/// term D; nullopt when some leading coefficient is not constant.
inline std::optional<std::map<int, Scalar>> express_in_root(PsDO P, const PsDO& R, int cutoff) {
    if (R.order() != 1 || R.lead() != RationalFunction(1)) throw DomainError("R must have leading term D");
    std::map<int, Scalar> out;
    P = P.truncated(cutoff);
    while (!P.is_zero()) {
        const int k = P.order();
        if (!P.lead().is_constant()) return std::nullopt;
        const Scalar c = P.lead().constant_value();
        out[k] = c;
        P = (P - RationalFunction(c) * psdo_pow(R, k, cutoff)).truncated(cutoff);
    }
    return out;
}

inline std::string PsDO::str(const std::string& var, const std::string& dsym) const {
    std::vector<std::pair<int, RationalFunction>> terms(t_.rbegin(), t_.rend());
    std::string out = detail::format_operator(terms, var, dsym);
    if (!is_exact()) {
        const std::string big_o = "O(" + dsym + "^" + std::to_string(floor_ - 1) + ")";
        out = out == "0" ? big_o : out + " + " + big_o;
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const PsDO& p) { return os << p.str(); }

} // namespace fcw
