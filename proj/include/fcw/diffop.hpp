#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "fcw/parse.hpp"
#include "fcw/ratfunc.hpp"

namespace fcw {

/// Element of Q(x)[D] in the normal form sum_i a_i(x) D^i (coefficients on
/// the left), with [D, f] = f'. The top coefficient is nonzero unless the
/// operator is zero.
class DiffOp {
public:
    DiffOp() = default;
    DiffOp(const Scalar& c) : DiffOp(RationalFunction(c)) {}
    DiffOp(long c) : DiffOp(RationalFunction(c)) {}
    DiffOp(RationalFunction f) { if (!f.is_zero()) c_.push_back(std::move(f)); }
    explicit DiffOp(std::vector<RationalFunction> coeffs) : c_(std::move(coeffs)) { trim(); }

    static DiffOp D() { return DiffOp(std::vector<RationalFunction>{RationalFunction(), RationalFunction(1)}); }
    static DiffOp x() { return DiffOp(RationalFunction::x()); }
    /// f * D^k
    static DiffOp term(RationalFunction f, int k) {
        std::vector<RationalFunction> v(static_cast<std::size_t>(k) + 1);
        v.back() = std::move(f);
        return DiffOp(std::move(v));
    }

    /// -1 for the zero operator.
    int order() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<RationalFunction>& coeffs() const { return c_; }
    RationalFunction coeff(int i) const {
        return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : RationalFunction();
    }
    RationalFunction lead() const { return c_.empty() ? RationalFunction() : c_.back(); }

    /// Largest deg_x over the coefficients (kNegInfDegree for zero).
    int deg_x() const {
        int d = kNegInfDegree;
        for (const auto& a : c_) d = std::max(d, a.deg_x());
        return d;
    }

    /// D applied to a function: sum_i a_i f^(i).
    RationalFunction apply(const RationalFunction& f) const {
        RationalFunction r, g = f;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!c_[i].is_zero()) r += c_[i] * g;
            if (i + 1 < c_.size()) g = g.derivative();
        }
        return r;
    }

    DiffOp& operator+=(const DiffOp& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    DiffOp& operator-=(const DiffOp& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
    friend DiffOp operator-(DiffOp a) {
        for (auto& c : a.c_) c = -c;
        return a;
    }
    friend DiffOp operator*(const Scalar& s, DiffOp a) {
        if (sgn(s) == 0) return {};
        for (auto& c : a.c_) c = s * c;
        return a;
    }
    /// Left multiplication by a function.
    friend DiffOp operator*(const RationalFunction& f, DiffOp a) {
        if (f.is_zero()) return {};
        for (auto& c : a.c_) c = f * c;
        return a;
    }
    friend DiffOp operator*(const DiffOp& a, const DiffOp& b);
    friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.c_ == b.c_; }
    friend bool operator!=(const DiffOp& a, const DiffOp& b) { return !(a == b); }

    /// "x^2*D^2 + 4*x*D + 2"
    std::string str(const std::string& var = "x", const std::string& dsym = "D") const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<RationalFunction> c_;
};

inline DiffOp operator*(const DiffOp& a, const DiffOp& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const int oa = a.order(), ob = b.order();
    // derivatives of b's coefficients, up to the order of a
    std::vector<std::vector<RationalFunction>> db(static_cast<std::size_t>(ob) + 1);
    for (int j = 0; j <= ob; ++j) {
        auto& v = db[static_cast<std::size_t>(j)];
        v.push_back(b.c_[static_cast<std::size_t>(j)]);
        for (int k = 1; k <= oa; ++k) v.push_back(v.back().is_zero() ? RationalFunction() : v.back().derivative());
    }
    std::vector<RationalFunction> r(static_cast<std::size_t>(oa + ob) + 1);
    for (int i = 0; i <= oa; ++i) {
        const RationalFunction& ai = a.c_[static_cast<std::size_t>(i)];
        if (ai.is_zero()) continue;
        for (int j = 0; j <= ob; ++j)
            for (int k = 0; k <= i; ++k) {
                const RationalFunction& d = db[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                if (d.is_zero()) continue;
                r[static_cast<std::size_t>(i + j - k)] += binomial(i, k) * (ai * d);
            }
    }
    return DiffOp(std::move(r));
}

inline DiffOp odo_mul(const DiffOp& a, const DiffOp& b) { return a * b; }

inline DiffOp commutator(const DiffOp& a, const DiffOp& b) { return a * b - b * a; }

inline DiffOp pow(const DiffOp& a, int n) {
    DiffOp r(1);
    for (int i = 0; i < n; ++i) r = r * a;
    return r;
}

namespace detail {

/// Renders sum over (power, coefficient) of coefficient * dsym^power, highest
/// power first. Polynomial and Laurent-monomial coefficients are split into
/// monomial terms; other coefficients are parenthesized.
inline std::string format_operator(const std::vector<std::pair<int, RationalFunction>>& terms,
                                   const std::string& var, const std::string& dsym) {
    std::string out;
    for (const auto& [k, f] : terms) {
        if (f.is_zero()) continue;
        std::string dpart = k == 0 ? std::string() : (k == 1 ? dsym : dsym + "^" + std::to_string(k));
        Scalar c;
        int p = 0;
        if (f.is_polynomial()) {
            for (int t = f.num().degree(); t >= 0; --t) {
                const Scalar& ct = f.num().coeffs()[static_cast<std::size_t>(t)];
                if (sgn(ct) == 0) continue;
                append_term(out, sgn(ct) < 0, monomial_body(abs(ct), t, var, dpart));
            }
        } else if (is_laurent_monomial(f, c, p)) {
            append_term(out, sgn(c) < 0, monomial_body(abs(c), p, var, dpart));
        } else {
            std::string body = "(" + f.str(var) + ")";
            if (!dpart.empty()) body += "*" + dpart;
            append_term(out, false, body);
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace detail

inline std::string DiffOp::str(const std::string& var, const std::string& dsym) const {
    std::vector<std::pair<int, RationalFunction>> terms;
    for (int i = order(); i >= 0; --i) terms.emplace_back(i, c_[static_cast<std::size_t>(i)]);
    return detail::format_operator(terms, var, dsym);
}

inline std::ostream& operator<<(std::ostream& os, const DiffOp& d) { return os << d.str(); }

/// Parses "x^2*D^2 + 4*x*D + 2"; division is allowed by order-zero operators.
inline DiffOp parse_diffop(std::string_view text, const std::string& var = "x", const std::string& dsym = "D") {
    return ExprParser<DiffOp>(text, {{var, DiffOp::x()}, {dsym, DiffOp::D()}},
                              [](const DiffOp& d) {
                                  if (d.order() != 0)
                                      throw DomainError("only functions can be inverted");
                                  return DiffOp(d.lead().inverse());
                              })
        .parse();
}

/// Polynomial in x and xi, keyed by (x-degree, xi-degree). x-degrees may be
/// negative for intermediate x-symbols.
class BiSymbol {
public:
    using Key = std::pair<int, int>;

    BiSymbol() = default;
    void add(int xdeg, int xideg, const Scalar& c) {
        auto& v = m_[{xdeg, xideg}];
        v += c;
        if (sgn(v) == 0) m_.erase({xdeg, xideg});
    }
    const std::map<Key, Scalar>& terms() const { return m_; }
    bool is_zero() const { return m_.empty(); }
    bool is_polynomial() const {
        for (const auto& [k, c] : m_)
            if (k.first < 0 || k.second < 0) return false;
        return true;
    }
    Scalar coeff(int xdeg, int xideg) const {
        auto it = m_.find({xdeg, xideg});
        return it == m_.end() ? Scalar(0) : it->second;
    }

    friend BiSymbol operator*(const BiSymbol& a, const BiSymbol& b) {
        BiSymbol r;
        for (const auto& [ka, ca] : a.m_)
            for (const auto& [kb, cb] : b.m_) r.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }
    friend bool operator==(const BiSymbol& a, const BiSymbol& b) { return a.m_ == b.m_; }

    /// Sorted by xi-degree then x-degree, highest first: "4*x*xi^2".
    std::string str(const std::string& var = "x", const std::string& xisym = "xi") const {
        std::string out;
        for (auto it = m_.rbegin(); it != m_.rend(); ++it) {
            const auto& [k, c] = *it;
            std::string xi = k.second == 0 ? "" : (k.second == 1 ? xisym : xisym + "^" + std::to_string(k.second));
            detail::append_term(out, sgn(c) < 0, detail::monomial_body(abs(c), k.first, var, xi));
        }
        return out.empty() ? "0" : out;
    }

private:
    std::map<Key, Scalar> m_;
};

/// Principal symbol a(x) xi^k. The leading coefficient must be a polynomial.
inline BiSymbol principal_symbol(const DiffOp& a) {
    if (a.is_zero()) throw DomainError("principal symbol of the zero operator");
    const RationalFunction lc = a.lead();
    if (!lc.is_polynomial())
        throw DomainError("leading coefficient " + lc.str() + " is not a polynomial");
    BiSymbol s;
    for (int t = 0; t <= lc.num().degree(); ++t) s.add(t, a.order(), lc.num().coeff(t));
    return s;
}

struct XSymbol {
    int degree = 0;
    BiSymbol symbol;
};

/// x-filtration degree (max deg_x of the coefficients) and the x-symbol:
/// the top-degree parts of the coefficients attaining that degree.
inline XSymbol x_symbol_and_degree(const DiffOp& a) {
    if (a.is_zero()) throw DomainError("x-degree of the zero operator is -infinity");
    XSymbol out{a.deg_x(), {}};
    for (int i = 0; i <= a.order(); ++i) {
        const RationalFunction& c = a.coeffs()[static_cast<std::size_t>(i)];
        if (!c.is_zero() && c.deg_x() == out.degree) out.symbol.add(out.degree, i, c.lead_at_infinity());
    }
    return out;
}

/// Image of `a` under the automorphism fixing x with D -> D + r.
inline DiffOp substitute_derivation(const DiffOp& a, const RationalFunction& r) {
    const DiffOp t = DiffOp::D() + DiffOp(r);
    DiffOp out, power(1);
    for (int i = 0; i <= a.order(); ++i) {
        if (i > 0) power = power * t;
        const RationalFunction& c = a.coeffs()[static_cast<std::size_t>(i)];
        if (!c.is_zero()) out += c * power;
    }
    return out;
}

/// gamma_p: x -> x, D -> D - p'(x), i.e. conjugation by e^{p(x)}.
inline DiffOp gamma_conjugate(const DiffOp& a, const Poly& p) {
    return substitute_derivation(a, -RationalFunction(p.derivative()));
}

/// Rewrites `a` in the generator D' = D + q (substitute D = D' - q).
inline DiffOp shift_derivation(const DiffOp& a, const RationalFunction& q) {
    return substitute_derivation(a, -q);
}

struct AdNilpotencyReport {
    std::optional<int> degree;   // least k with (ad b)^k(a) = 0, if found within the bound
    std::vector<DiffOp> chain;   // (ad b)^1(a), (ad b)^2(a), ...

    bool nilpotent() const { return degree.has_value(); }
};

inline constexpr int kDefaultAdBound = 16;

inline AdNilpotencyReport ad_nilpotency_degree(const DiffOp& b, const DiffOp& a, int kmax = kDefaultAdBound) {
    if (kmax < 1) throw DomainError("kmax must be at least 1");
    AdNilpotencyReport r;
    if (a.is_zero()) { r.degree = 0; return r; }
    DiffOp cur = a;
    for (int k = 1; k <= kmax; ++k) {
        cur = commutator(b, cur);
        r.chain.push_back(cur);
        if (cur.is_zero()) { r.degree = k; break; }
    }
    return r;
}

} // namespace fcw
