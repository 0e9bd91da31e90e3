#pragma once

#include <algorithm>
#include <cctype>
#include <climits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fcw/poly.hpp"

namespace fcw {

/// Sentinel for deg_x(0).
inline constexpr int kNegInfDegree = INT_MIN;

/// Element of Q(x), stored as num/den with den monic and gcd(num, den) = 1.
/// The canonical form makes operator== a syntactic comparison.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(1) {}
    RationalFunction(const Scalar& c) : num_(c), den_(1) {}
    RationalFunction(long c) : num_(c), den_(1) {}
    RationalFunction(Poly p) : num_(std::move(p)), den_(1) {}
    RationalFunction(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }

    static RationalFunction x() { return RationalFunction(Poly::x()); }
    /// (x - root)^power for any integer power.
    static RationalFunction linear_power(const Scalar& root, int power) {
        if (power >= 0) return RationalFunction(Poly::linear_power(root, power));
        return RationalFunction(Poly(1), Poly::linear_power(root, -power));
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    bool is_constant() const { return is_polynomial() && num_.is_constant(); }
    Scalar constant_value() const { return num_.coeff(0); }

    /// deg num - deg den, or kNegInfDegree for zero.
    int deg_x() const { return is_zero() ? kNegInfDegree : num_.degree() - den_.degree(); }
    /// Coefficient of x^deg_x in the expansion at infinity.
    Scalar lead_at_infinity() const { return is_zero() ? Scalar(0) : num_.lead() / den_.lead(); }

    Scalar eval(const Scalar& at) const {
        Scalar d = den_.eval(at);
        if (sgn(d) == 0) throw DomainError("rational function has a pole at " + to_string(at));
        return num_.eval(at) / d;
    }

    RationalFunction derivative() const {
        if (is_polynomial()) return RationalFunction(num_.derivative());
        return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    RationalFunction inverse() const {
        if (is_zero()) throw DomainError("inverse of the zero rational function");
        return RationalFunction(den_, num_);
    }

    RationalFunction pow(int n) const {
        if (n < 0) return inverse().pow(-n);
        return RationalFunction(num_.pow(n), den_.pow(n));
    }

    /// f(x + shift).
    RationalFunction shifted(const Scalar& shift) const {
        return RationalFunction(num_.shifted(shift), den_.shifted(shift));
    }

    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) {
            if (a.is_polynomial()) return RationalFunction(a.num_ + b.num_);
            return RationalFunction(a.num_ + b.num_, a.den_);
        }
        Poly g = gcd(a.den_, b.den_);
        Poly bd = b.den_.divmod(g).first;
        Poly ad = a.den_.divmod(g).first;
        return RationalFunction(a.num_ * bd + b.num_ * ad, a.den_ * bd);
    }
    friend RationalFunction operator-(const RationalFunction& a) {
        RationalFunction r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return a + (-b);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_polynomial() && b.is_polynomial()) return RationalFunction(a.num_ * b.num_);
        // cross-cancel before multiplying to keep degrees small
        Poly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
        RationalFunction r;
        r.num_ = a.num_.divmod(g1).first * b.num_.divmod(g2).first;
        r.den_ = a.den_.divmod(g2).first * b.den_.divmod(g1).first;
        r.normalize_lead();
        return r;
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        return a * b.inverse();
    }
    friend RationalFunction operator*(const Scalar& s, const RationalFunction& a) {
        if (sgn(s) == 0) return {};
        RationalFunction r = a;
        r.num_ *= s;
        return r;
    }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    std::string str(const std::string& var = "x") const;

private:
    void reduce() {
        if (den_.is_zero()) throw DomainError("rational function with zero denominator");
        if (num_.is_zero()) { den_ = Poly(1); return; }
        Poly g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_.divmod(g).first;
            den_ = den_.divmod(g).first;
        }
        normalize_lead();
    }
    void normalize_lead() {
        Scalar l = den_.lead();
        if (l != 1) {
            num_ *= Scalar(1 / l);
            den_ *= Scalar(1 / l);
        }
    }

    Poly num_;
    Poly den_;
};

/// Canonical reduced form of n/d.
inline RationalFunction reduce_ratfunc(const Poly& n, const Poly& d) { return RationalFunction(n, d); }

/// Order of vanishing of a polynomial at `at` (multiplicity of the root).
inline int multiplicity(const Poly& p, const Scalar& at) {
    if (p.is_zero()) throw DomainError("multiplicity of the zero polynomial");
    Poly s = p.shifted(at);
    int k = 0;
    while (sgn(s.coeff(k)) == 0) ++k;
    return k;
}

/// Distinct rational roots, ascending (rational root test on the integer
/// multiple of p).
inline std::vector<Scalar> rational_roots(const Poly& p) {
    if (p.is_zero()) throw DomainError("roots of the zero polynomial");
    std::vector<Scalar> out;
    Poly rest = p;
    if (multiplicity(rest, Scalar(0)) > 0) {
        out.emplace_back(0);
        rest = rest.divmod(Poly::linear_power(Scalar(0), multiplicity(rest, Scalar(0)))).first;
    }
    if (rest.degree() == 0) return out;
    mpz_class den = 1;
    for (const auto& c : rest.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    auto divisors = [](mpz_class n) {
        n = abs(n);
        std::vector<mpz_class> d;
        for (mpz_class i = 1; i * i <= n; ++i)
            if (n % i == 0) {
                d.push_back(i);
                if (i * i != n) d.push_back(n / i);
            }
        return d;
    };
    const mpz_class a0 = mpz_class(rest.coeff(0) * den), an = mpz_class(rest.lead() * den);
    for (const auto& num : divisors(a0))
        for (const auto& q : divisors(an))
            for (int sign : {1, -1}) {
                Scalar r(num * sign, q);
                r.canonicalize();
                if (sgn(rest.eval(r)) == 0 && std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
            }
    std::sort(out.begin(), out.end());
    return out;
}

/// v_lambda(f): order of vanishing (negative for poles).
inline int valuation_at(const RationalFunction& f, const Scalar& lambda) {
    if (f.is_zero()) throw DomainError("valuation of the zero rational function is undefined");
    return multiplicity(f.num(), lambda) - multiplicity(f.den(), lambda);
}

/// Laurent expansion at lambda: the returned coefficients multiply
/// (x-lambda)^k, ..., (x-lambda)^(k+terms-1) where k = valuation_at(f, lambda).
struct LaurentSeries {
    int start = 0;
    std::vector<Scalar> coeffs;

    Scalar at(int power) const {
        int i = power - start;
        return i >= 0 && i < static_cast<int>(coeffs.size()) ? coeffs[static_cast<std::size_t>(i)]
                                                             : Scalar(0);
    }
};

/// Power-series quotient a/b truncated to `terms` coefficients; b(0) != 0.
inline std::vector<Scalar> series_divide(const Poly& a, const Poly& b, int terms) {
    std::vector<Scalar> c(static_cast<std::size_t>(std::max(terms, 0)));
    const Scalar b0 = b.coeff(0);
    for (int i = 0; i < terms; ++i) {
        Scalar acc = a.coeff(i);
        for (int j = 1; j <= std::min(i, b.degree()); ++j)
            acc -= b.coeff(j) * c[static_cast<std::size_t>(i - j)];
        c[static_cast<std::size_t>(i)] = acc / b0;
    }
    return c;
}

inline LaurentSeries laurent_expand(const RationalFunction& f, const Scalar& lambda, int terms) {
    if (f.is_zero()) throw DomainError("Laurent expansion of the zero rational function");
    Poly n = f.num().shifted(lambda), d = f.den().shifted(lambda);
    int vn = 0, vd = 0;
    while (sgn(n.coeff(vn)) == 0) ++vn;
    while (sgn(d.coeff(vd)) == 0) ++vd;
    std::vector<Scalar> nc(n.coeffs().begin() + vn, n.coeffs().end());
    std::vector<Scalar> dc(d.coeffs().begin() + vd, d.coeffs().end());
    return {vn - vd, series_divide(Poly(std::move(nc)), Poly(std::move(dc)), terms)};
}

/// Laurent coefficients of f at lambda for the powers lo..hi inclusive
/// (f may be zero; missing powers are zero).
inline std::vector<Scalar> laurent_window(const RationalFunction& f, const Scalar& lambda, int lo,
                                          int hi) {
    std::vector<Scalar> out(static_cast<std::size_t>(std::max(hi - lo + 1, 0)));
    if (f.is_zero() || hi < lo) return out;
    Poly n = f.num().shifted(lambda), d = f.den().shifted(lambda);
    int vd = 0;
    while (sgn(d.coeff(vd)) == 0) ++vd;
    std::vector<Scalar> dc(d.coeffs().begin() + vd, d.coeffs().end());
    // f = n / (t^vd * d'), so coefficient of t^p is that of t^(p+vd) in n/d'
    int need = hi + vd + 1;
    if (need <= 0) return out;
    auto s = series_divide(n, Poly(std::move(dc)), need);
    for (int p = lo; p <= hi; ++p) {
        int idx = p + vd;
        if (idx >= 0 && idx < need) out[static_cast<std::size_t>(p - lo)] = s[static_cast<std::size_t>(idx)];
    }
    return out;
}

/// f = polynomial part + sum_{(lambda, j)} c * (x - lambda)^(-j).
struct PartialFractions {
    Poly polynomial_part;
    std::map<std::pair<Scalar, int>, Scalar> principal;  // (lambda, j) -> coefficient

    RationalFunction resum() const {
        RationalFunction r(polynomial_part);
        for (const auto& [key, c] : principal)
            r += c * RationalFunction::linear_power(key.first, -key.second);
        return r;
    }
};

inline PartialFractions partial_fractions(const RationalFunction& f, const std::vector<Scalar>& poles) {
    PartialFractions out;
    Poly rest = f.den();
    std::vector<std::pair<Scalar, int>> mult;
    for (const Scalar& l : poles) {
        int e = multiplicity(rest, l);
        if (e == 0) continue;
        rest = rest.divmod(Poly::linear_power(l, e)).first;
        mult.emplace_back(l, e);
    }
    if (rest.degree() > 0) {
        std::string where = "factor " + rest.str();
        // name a rational root when there is one among the factor's candidates
        if (rest.degree() == 1) where = to_string(Scalar(-rest.coeff(0) / rest.coeff(1)));
        throw DomainError("pole outside the declared list: " + where);
    }
    out.polynomial_part = f.num().divmod(f.den()).first;
    for (const auto& [l, e] : mult) {
        auto w = laurent_window(f, l, -e, -1);
        for (int j = 1; j <= e; ++j) {
            const Scalar& c = w[static_cast<std::size_t>(e - j)];
            if (sgn(c) != 0) out.principal[{l, j}] = c;
        }
    }
    return out;
}

namespace detail {

inline bool is_laurent_monomial(const RationalFunction& f, Scalar& coeff, int& power) {
    const Poly& n = f.num();
    const Poly& d = f.den();
    auto single = [](const Poly& p, Scalar& c, int& k) {
        int nz = 0;
        for (int i = 0; i <= p.degree(); ++i)
            if (sgn(p.coeff(i)) != 0) { ++nz; c = p.coeff(i); k = i; }
        return nz == 1;
    };
    Scalar cn, cd;
    int kn = 0, kd = 0;
    if (!single(n, cn, kn) || !single(d, cd, kd)) return false;
    coeff = cn / cd;
    power = kn - kd;
    return true;
}

inline bool needs_parens(const Poly& p) {
    int nz = 0;
    for (int i = 0; i <= p.degree(); ++i)
        if (sgn(p.coeff(i)) != 0) ++nz;
    return nz > 1 || (nz == 1 && sgn(p.lead()) < 0);
}

} // namespace detail

inline std::string RationalFunction::str(const std::string& var) const {
    if (is_polynomial()) return num_.str(var);
    Scalar c;
    int k = 0;
    if (detail::is_laurent_monomial(*this, c, k)) {
        std::string body = detail::monomial_body(abs(c), k, var);
        return sgn(c) < 0 ? "-" + body : body;
    }
    std::string n = num_.str(var), d = den_.str(var);
    if (detail::needs_parens(num_)) n = "(" + n + ")";
    if (detail::needs_parens(den_) || d.find('*') != std::string::npos) d = "(" + d + ")";
    return n + "/" + d;
}

inline std::ostream& operator<<(std::ostream& os, const RationalFunction& f) { return os << f.str(); }

} // namespace fcw
