#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "fcw/diffop.hpp"
#include "fcw/grassmannian.hpp"

namespace fcw {

/// Coordinates for a finite set of operators: a_j = (sum_t c_{j,t} x^t) / Q_j
/// with Q_j the monic lcm of the denominators of the j-th coefficients.
class OpCoordinates {
public:
    OpCoordinates() = default;
    explicit OpCoordinates(const std::vector<DiffOp>& ops) {
        for (const auto& d : ops) widen_for(d);
        finish();
    }
    /// Explicit layout: Q_j and numerator degree bounds.
    OpCoordinates(std::vector<Poly> q, std::vector<int> max_t) : q_(std::move(q)), max_t_(std::move(max_t)) {
        finish();
    }

    std::size_t size() const { return cols_.size(); }
    int order_bound() const { return static_cast<int>(q_.size()) - 1; }
    const Poly& q(int j) const { return q_[static_cast<std::size_t>(j)]; }
    int j_of(std::size_t col) const { return cols_[col].first; }
    int t_of(std::size_t col) const { return cols_[col].second; }
    int xdeg_of(std::size_t col) const { return t_of(col) - q(j_of(col)).degree(); }
    std::size_t col(int j, int t) const { return offset_[static_cast<std::size_t>(j)] + static_cast<std::size_t>(t); }

    bool fits(const DiffOp& d) const {
        if (d.order() > order_bound()) return false;
        for (int j = 0; j <= d.order(); ++j) {
            const RationalFunction& a = d.coeffs()[static_cast<std::size_t>(j)];
            if (a.is_zero()) continue;
            auto [quot, rem] = q(j).divmod(a.den());
            if (!rem.is_zero()) return false;
            if ((a.num() * quot).degree() > max_t_[static_cast<std::size_t>(j)]) return false;
        }
        return true;
    }

    Vec<Scalar> vec(const DiffOp& d) const {
        if (!fits(d)) throw DomainError("operator does not fit the coordinate layout: " + d.str());
        Vec<Scalar> v(size(), Scalar(0));
        for (int j = 0; j <= d.order(); ++j) {
            const RationalFunction& a = d.coeffs()[static_cast<std::size_t>(j)];
            if (a.is_zero()) continue;
            Poly n = a.num() * q(j).divmod(a.den()).first;
            for (int t = 0; t <= n.degree(); ++t) v[col(j, t)] = n.coeff(t);
        }
        return v;
    }

    DiffOp op(const Vec<Scalar>& v) const {
        std::vector<RationalFunction> c;
        for (int j = 0; j <= order_bound(); ++j) {
            std::vector<Scalar> n(static_cast<std::size_t>(max_t_[static_cast<std::size_t>(j)]) + 1);
            for (int t = 0; t <= max_t_[static_cast<std::size_t>(j)]; ++t) n[static_cast<std::size_t>(t)] = v[col(j, t)];
            c.emplace_back(Poly(std::move(n)), q(j));
        }
        return DiffOp(std::move(c));
    }

    /// Column order sorted by a key, largest first (ties broken by j, then t).
    std::vector<std::size_t> order_by(const std::function<std::pair<int, int>(std::size_t)>& key) const {
        std::vector<std::size_t> o(size());
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = i;
        std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) {
            auto ka = key(a), kb = key(b);
            if (ka != kb) return ka > kb;
            return std::make_pair(j_of(a), t_of(a)) > std::make_pair(j_of(b), t_of(b));
        });
        return o;
    }
    /// D-order first, then x-degree: pivots are principal-symbol monomials.
    std::vector<std::size_t> d_order() const {
        return order_by([this](std::size_t c) { return std::make_pair(j_of(c), xdeg_of(c)); });
    }
    /// x-degree first, then D-order: pivots are x-symbol monomials.
    std::vector<std::size_t> x_order() const {
        return order_by([this](std::size_t c) { return std::make_pair(xdeg_of(c), j_of(c)); });
    }

private:
    void widen_for(const DiffOp& d) {
        if (static_cast<int>(q_.size()) <= d.order()) {
            q_.resize(static_cast<std::size_t>(d.order()) + 1, Poly(1));
            max_t_.resize(static_cast<std::size_t>(d.order()) + 1, -1);
        }
        for (int j = 0; j <= d.order(); ++j) {
            const RationalFunction& a = d.coeffs()[static_cast<std::size_t>(j)];
            if (a.is_zero()) continue;
            Poly& qj = q_[static_cast<std::size_t>(j)];
            qj = (qj * a.den()).divmod(gcd(qj, a.den())).first.monic();
        }
        pending_.push_back(d);
    }
    void finish() {
        for (const auto& d : pending_)
            for (int j = 0; j <= d.order(); ++j) {
                const RationalFunction& a = d.coeffs()[static_cast<std::size_t>(j)];
                if (a.is_zero()) continue;
                int deg = (a.num() * q(j).divmod(a.den()).first).degree();
                max_t_[static_cast<std::size_t>(j)] = std::max(max_t_[static_cast<std::size_t>(j)], deg);
            }
        pending_.clear();
        offset_.clear();
        cols_.clear();
        for (int j = 0; j <= order_bound(); ++j) {
            offset_.push_back(cols_.size());
            for (int t = 0; t <= max_t_[static_cast<std::size_t>(j)]; ++t) cols_.emplace_back(j, t);
        }
    }

    std::vector<Poly> q_;
    std::vector<int> max_t_;
    std::vector<std::size_t> offset_;
    std::vector<std::pair<int, int>> cols_;
    std::vector<DiffOp> pending_;
};

/// Echelon basis of span(ops) in the given layout and column order.
inline Echelon<Scalar> span_echelon(const OpCoordinates& c, const std::vector<DiffOp>& ops,
                                    const std::vector<std::size_t>& order) {
    Matrix<Scalar> m;
    for (const auto& d : ops) m.push_back(c.vec(d));
    if (m.empty()) return {};
    return rref(std::move(m), order);
}

/// Basis of span(rows) intersected with the coordinate subspace where every
/// column outside `keep` vanishes.
inline Matrix<Scalar> intersect_coordinate_subspace(const OpCoordinates& c, Matrix<Scalar> rows,
                                                    const std::function<bool(std::size_t)>& keep) {
    if (rows.empty()) return {};
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!keep(i)) order.push_back(i);
    const std::size_t outside = order.size();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (keep(i)) order.push_back(i);
    Echelon<Scalar> e = rref(std::move(rows), order);
    Matrix<Scalar> out;
    for (std::size_t r = 0; r < e.rank(); ++r) {
        bool inside = std::find(order.begin() + static_cast<std::ptrdiff_t>(outside), order.end(), e.pivots[r]) !=
                      order.end();
        if (inside) out.push_back(e.rows[r]);
    }
    return out;
}

struct OperatorSpaceBasis {
    int m = 0;  // D-order bound
    int d = 0;  // x-degree bound
    std::vector<DiffOp> basis;
    int window = 0;       // z-degree of the V window that was tested
    bool stable = false;  // same dimension on a wider window
};

namespace detail {

/// Sorted union of supports.
inline std::vector<Scalar> joint_support(const GrPoint& V, const GrPoint& W) {
    std::set<Scalar> s;
    for (const auto& l : V.support()) s.insert(l);
    for (const auto& l : W.support()) s.insert(l);
    return {s.begin(), s.end()};
}

/// Rows expressing "q_W * h lies in V_0" for h given by its Laurent window
/// [lo, hi] at lambda: negative powers vanish, and every condition at lambda
/// applied to q_W * h vanishes. `g` holds the Laurent window of q_W * h.
inline void membership_rows(const GrPoint& W, const Scalar& lambda, int lo, const std::vector<Vec<Scalar>>& g,
                            Matrix<Scalar>& out) {
    // g[u][p - lo] is the coefficient of (z - lambda)^p of unknown u
    const std::size_t nu = g.size();
    for (int p = lo; p < 0; ++p) {
        Vec<Scalar> row(nu);
        for (std::size_t u = 0; u < nu; ++u) row[u] = g[u][static_cast<std::size_t>(p - lo)];
        out.push_back(std::move(row));
    }
    for (const auto& c : W.conditions()) {
        if (c.lambda != lambda) continue;
        Vec<Scalar> row(nu, Scalar(0));
        for (int j = 0; j <= c.order(); ++j) {
            const Scalar w = c.jet[static_cast<std::size_t>(j)] * factorial(j);
            if (sgn(w) == 0) continue;
            for (std::size_t u = 0; u < nu; ++u) row[u] += w * g[u][static_cast<std::size_t>(j - lo)];
        }
        out.push_back(std::move(row));
    }
}

/// Pole order at lambda of the j-th ansatz coefficient for D(V,W) of order <= m:
/// D = q_W^-1 A p_V^-1 with A in the Weyl algebra and p_V = prod (z-l)^(N-k).
inline int ansatz_pole(const GrPoint& V, const GrPoint& W, const Scalar& lambda, int m, int j) {
    const int ep = std::max(0, V.primary_order(lambda) - V.k(lambda));
    return W.k(lambda) + (ep > 0 ? ep + m - j : 0);
}

/// z-degree of a V window on which D.V in W for D of order <= m with pole
/// orders e at the points forces it everywhere.
inline int forcing_window(const GrPoint& V, const GrPoint& W, const std::vector<Scalar>& points, int m,
                          const std::map<Scalar, int>& e) {
    int total = 0;
    for (const auto& l : points) {
        int ml = std::max(V.primary_order(l) - V.k(l),
                          W.primary_order(l) - W.k(l) + m + (e.count(l) ? e.at(l) : 0));
        total += ml;
    }
    return std::max(total - 1, 0);
}

} // namespace detail

/// Coordinate layout of the ansatz for D(V,W) in the (m, d) box.
inline OpCoordinates operator_space_layout(const GrPoint& V, const GrPoint& W, int m, int d) {
    const auto points = detail::joint_support(V, W);
    std::vector<Poly> q;
    std::vector<int> max_t;
    for (int j = 0; j <= m; ++j) {
        Poly qj(1);
        for (const auto& l : points) qj *= Poly::linear_power(l, detail::ansatz_pole(V, W, l, m, j));
        max_t.push_back(d + qj.degree());
        q.push_back(std::move(qj));
    }
    return OpCoordinates(std::move(q), std::move(max_t));
}

namespace detail {

/// Nullspace of the containment conditions for the ansatz on a V window.
inline Matrix<Scalar> operator_space_kernel(const GrPoint& V, const GrPoint& W, const OpCoordinates& c, int m,
                                            int window) {
    const auto points = joint_support(V, W);
    const Poly qW = W.q();
    const std::size_t nu = c.size();
    Matrix<Scalar> rows;
    for (const auto& v : basis_up_to_degree(V, window)) {
        std::vector<RationalFunction> dv{v};
        for (int j = 1; j <= m; ++j) dv.push_back(dv.back().derivative());
        for (const auto& l : points) {
            // B_j = q_W v^(j) / Q_j; unknown (j, t) contributes z^t B_j
            int lo = 0;
            std::vector<RationalFunction> B;
            for (int j = 0; j <= m; ++j) {
                B.push_back(dv[static_cast<std::size_t>(j)] * RationalFunction(qW, c.q(j)));
                if (!B.back().is_zero()) lo = std::min(lo, valuation_at(B.back(), l));
            }
            const int hi = W.primary_order(l) - 1;
            std::vector<Vec<Scalar>> g(nu, Vec<Scalar>(static_cast<std::size_t>(hi - lo + 1), Scalar(0)));
            for (int j = 0; j <= m; ++j) {
                auto bw = laurent_window(B[static_cast<std::size_t>(j)], l, lo, hi);
                // z^t = sum_i C(t,i) l^(t-i) (z-l)^i
                const std::size_t start = c.col(j, 0);
                const std::size_t end = j < c.order_bound() ? c.col(j + 1, 0) : nu;
                for (std::size_t u = start; u < end; ++u) {
                    const int t = c.t_of(u);
                    auto& gu = g[u];
                    for (int i = 0; i <= t && i <= hi - lo; ++i) {
                        const Scalar w = binomial(t, i) * scalar_pow(l, t - i);
                        if (sgn(w) == 0) continue;
                        for (int p = lo + i; p <= hi; ++p) gu[static_cast<std::size_t>(p - lo)] += w * bw[static_cast<std::size_t>(p - i - lo)];
                    }
                }
            }
            membership_rows(W, l, lo, g, rows);
        }
    }
    return nullspace(rows, nu);
}

} // namespace detail

/// Basis of D(V,W) within the box (D-order <= m, x-degree <= d), echelon in
/// the principal-symbol order.
inline OperatorSpaceBasis operator_space_basis(const GrPoint& V, const GrPoint& W, int m, int d) {
    if (m < 0 || d < 0) throw DomainError("box bounds must be nonnegative");
    OpCoordinates c = operator_space_layout(V, W, m, d);
    const auto points = detail::joint_support(V, W);
    std::map<Scalar, int> e;
    for (const auto& l : points) e[l] = detail::ansatz_pole(V, W, l, m, 0);
    OperatorSpaceBasis out;
    out.m = m;
    out.d = d;
    out.window = detail::forcing_window(V, W, points, m, e);
    Matrix<Scalar> ker = detail::operator_space_kernel(V, W, c, m, out.window);
    out.stable = detail::operator_space_kernel(V, W, c, m, out.window + 2).size() == ker.size();
    if (!ker.empty()) {
        Echelon<Scalar> ech = rref(std::move(ker), c.d_order());
        for (const auto& r : ech.rows) out.basis.push_back(c.op(r));
    }
    return out;
}

/// D.V in W, tested on a V window that forces it everywhere.
inline bool maps_into(const DiffOp& D, const GrPoint& V, const GrPoint& W) {
    if (D.is_zero()) return true;
    const auto points = detail::joint_support(V, W);
    std::map<Scalar, int> e;
    for (const auto& a : D.coeffs()) {
        if (a.is_zero()) continue;
        Poly rest = a.den();
        for (const auto& l : points) {
            int k = multiplicity(rest, l);
            if (k > 0) {
                e[l] = std::max(e[l], k);
                rest = rest.divmod(Poly::linear_power(l, k)).first;
            }
        }
        // poles off the supports never occur in D(V,W)
        if (rest.degree() > 0) return false;
    }
    const int window = detail::forcing_window(V, W, points, D.order(), e);
    for (const auto& v : basis_up_to_degree(V, window))
        if (!membership(W, D.apply(v))) return false;
    return true;
}

struct CompositionReport {
    int m = 0, d = 0;                // target box
    int factor_m = 0, factor_d = 0;  // both factor boxes
    std::size_t box_dim = 0;
    std::size_t product_dim = 0;  // span of products cut down to the target box
    bool products_map_into = true;
    bool equal = false;
};

namespace detail {

inline CompositionReport composition_at(const GrPoint& U, const GrPoint& V, const GrPoint& W, int m, int d, int fm,
                                        int fd) {
    CompositionReport r{m, d, fm, fd};
    auto target = operator_space_basis(W, U, m, d).basis;
    auto left = operator_space_basis(V, U, fm, fd).basis;
    auto right = operator_space_basis(W, V, fm, fd).basis;
    std::vector<DiffOp> products;
    for (const auto& a : left)
        for (const auto& b : right) {
            DiffOp p = a * b;
            if (p.is_zero()) continue;
            if (p.order() <= m && !maps_into(p, W, U)) r.products_map_into = false;
            products.push_back(std::move(p));
        }
    std::vector<DiffOp> all = products;
    all.insert(all.end(), target.begin(), target.end());
    OpCoordinates c(all);
    Matrix<Scalar> rows;
    for (const auto& p : products) rows.push_back(c.vec(p));
    Matrix<Scalar> cut = intersect_coordinate_subspace(
        c, std::move(rows), [&](std::size_t col) { return c.j_of(col) <= m && c.xdeg_of(col) <= d; });
    Matrix<Scalar> box;
    for (const auto& t : target) box.push_back(c.vec(t));
    r.box_dim = rank(box);
    r.product_dim = cut.size();
    Matrix<Scalar> both = cut;
    both.insert(both.end(), box.begin(), box.end());
    r.equal = r.product_dim == r.box_dim && rank(both) == r.box_dim;
    return r;
}

} // namespace detail

/// span{D(V,U) box * D(W,V) box} cut down to the (m, d) box against the
/// D(W,U) box. Factor boxes grow from (m, d) until equality holds, and the
/// result must persist one step wider.
inline CompositionReport composition_check(const GrPoint& U, const GrPoint& V, const GrPoint& W, int m, int d,
                                           int max_extra = 4) {
    CompositionReport last;
    for (int extra = 0; extra <= max_extra; ++extra) {
        last = detail::composition_at(U, V, W, m, d, m + extra, d + extra);
        if (!last.products_map_into) return last;
        if (last.equal) {
            CompositionReport wider = detail::composition_at(U, V, W, m, d, m + extra + 1, d + extra + 1);
            if (!wider.equal || !wider.products_map_into) return wider;
            return last;
        }
    }
    return last;
}

} // namespace fcw
