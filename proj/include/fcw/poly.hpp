#pragma once

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fcw/scalar.hpp"

namespace fcw {

/// Dense univariate polynomial over the rationals, coefficients stored from
/// low degree to high. The highest stored coefficient is never zero; the zero
/// polynomial has no coefficients and degree -1.
class Poly {
public:
    Poly() = default;
    Poly(const Scalar& c) { if (sgn(c) != 0) c_.push_back(c); }
    Poly(long c) : Poly(Scalar(c)) {}
    explicit Poly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<Scalar> coeffs) : c_(coeffs) { trim(); }

    static Poly x() { return Poly({Scalar(0), Scalar(1)}); }
    static Poly monomial(const Scalar& c, int degree) {
        std::vector<Scalar> v(static_cast<std::size_t>(degree) + 1);
        v.back() = c;
        return Poly(std::move(v));
    }
    /// (x - root)^power
    static Poly linear_power(const Scalar& root, int power) {
        Poly base({-root, Scalar(1)});
        return base.pow(power);
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<Scalar>& coeffs() const { return c_; }
    Scalar coeff(int i) const {
        return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : Scalar(0);
    }
    Scalar lead() const { return c_.empty() ? Scalar(0) : c_.back(); }

    Scalar eval(const Scalar& at) const {
        Scalar r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * at + *it;
        return r;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Scalar> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Scalar(static_cast<long>(i));
        return Poly(std::move(d));
    }

    Poly monic() const {
        if (c_.empty()) return {};
        Poly r = *this;
        Scalar l = lead();
        for (auto& c : r.c_) c /= l;
        return r;
    }

    Poly pow(int n) const {
        Poly r(1), b = *this;
        while (n > 0) {
            if (n & 1) r *= b;
            n >>= 1;
            if (n) b *= b;
        }
        return r;
    }

    /// p(x + shift): re-expansion around x = shift (Taylor shift).
    Poly shifted(const Scalar& shift) const {
        std::vector<Scalar> a = c_;
        const std::size_t n = a.size();
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = n - 1; j > i; --j) a[j - 1] += shift * a[j];
        return Poly(std::move(a));
    }

    /// Composition p(q(x)).
    Poly compose(const Poly& q) const {
        Poly r;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * q + Poly(*it);
        return r;
    }

    /// Polynomial division with remainder.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw DomainError("polynomial division by zero");
        if (degree() < d.degree()) return {Poly(), *this};
        std::vector<Scalar> rem = c_;
        std::vector<Scalar> quo(static_cast<std::size_t>(degree() - d.degree()) + 1);
        const Scalar dl = d.lead();
        for (int i = degree() - d.degree(); i >= 0; --i) {
            const Scalar f = rem[static_cast<std::size_t>(i + d.degree())] / dl;
            quo[static_cast<std::size_t>(i)] = f;
            if (is_zero_scalar(f)) continue;
            for (int j = 0; j <= d.degree(); ++j)
                rem[static_cast<std::size_t>(i + j)] -= f * d.c_[static_cast<std::size_t>(j)];
        }
        return {Poly(std::move(quo)), Poly(std::move(rem))};
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }
    Poly& operator*=(const Scalar& s) {
        if (is_zero_scalar(s)) { c_.clear(); return *this; }
        for (auto& c : c_) c *= s;
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) { for (auto& c : a.c_) c = -c; return a; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Scalar> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (is_zero_scalar(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(r));
    }
    friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
    friend Poly operator*(const Scalar& s, Poly a) { return a *= s; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    std::string str(const std::string& var = "x") const;

private:
    static bool is_zero_scalar(const Scalar& s) { return sgn(s) == 0; }
    void trim() {
        for (auto& v : c_) v.canonicalize();
        while (!c_.empty() && is_zero_scalar(c_.back())) c_.pop_back();
    }

    std::vector<Scalar> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a.divmod(b).second;
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

namespace detail {

/// Renders c * var^k as a product term, sign handled by the caller.
inline std::string monomial_body(const Scalar& abs_coeff, int k, const std::string& var,
                                 const std::string& trailing = {}) {
    std::vector<std::string> parts;
    const bool unit = abs_coeff == 1;
    if (!unit || (k == 0 && trailing.empty())) parts.push_back(to_string(abs_coeff));
    if (k == 1) parts.push_back(var);
    else if (k != 0) parts.push_back(var + "^" + std::to_string(k));
    if (!trailing.empty()) parts.push_back(trailing);
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "*";
        out += parts[i];
    }
    return out;
}

/// Joins signed terms as "a + b - c".
inline void append_term(std::string& out, bool negative, const std::string& body) {
    if (out.empty()) out = negative ? "-" + body : body;
    else out += (negative ? " - " : " + ") + body;
}

} // namespace detail

inline std::string Poly::str(const std::string& var) const {
    if (c_.empty()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const Scalar& c = c_[static_cast<std::size_t>(i)];
        if (is_zero_scalar(c)) continue;
        detail::append_term(out, sgn(c) < 0, detail::monomial_body(abs(c), i, var));
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

} // namespace fcw
