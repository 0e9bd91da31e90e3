#pragma once

#include <map>
#include <string>
#include <vector>

#include "fcw/linalg.hpp"

namespace fcw {

using ScalarMatrix = Matrix<Scalar>;

inline ScalarMatrix identity_matrix(std::size_t n) {
    ScalarMatrix m(n, Vec<Scalar>(n, Scalar(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline ScalarMatrix mat_mul(const ScalarMatrix& a, const ScalarMatrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    ScalarMatrix c(n, Vec<Scalar>(m, Scalar(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (sgn(a[i][l]) == 0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

inline ScalarMatrix mat_add(ScalarMatrix a, const ScalarMatrix& b, const Scalar& s = 1) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += s * b[i][j];
    return a;
}

inline Scalar trace(const ScalarMatrix& a) {
    Scalar t(0);
    for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
    return t;
}

inline ScalarMatrix mat_inverse(const ScalarMatrix& a) {
    const std::size_t n = a.size();
    ScalarMatrix aug = a;
    for (std::size_t i = 0; i < n; ++i) {
        if (aug[i].size() != n) throw DomainError("matrix is not square");
        for (std::size_t j = 0; j < n; ++j) aug[i].push_back(i == j ? Scalar(1) : Scalar(0));
    }
    Echelon<Scalar> e = rref(std::move(aug));
    if (e.rank() < n || e.pivots[n - 1] != n - 1) throw DomainError("matrix is singular");
    ScalarMatrix inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[i] = Vec<Scalar>(e.rows[i].begin() + static_cast<std::ptrdiff_t>(n), e.rows[i].end());
    return inv;
}

/// p(M) by Horner.
inline ScalarMatrix poly_of_matrix(const Poly& p, const ScalarMatrix& m) {
    ScalarMatrix r(m.size(), Vec<Scalar>(m.size(), Scalar(0)));
    const ScalarMatrix id = identity_matrix(m.size());
    for (int i = p.degree(); i >= 0; --i) r = mat_add(mat_mul(r, m), id, p.coeff(i));
    return r;
}

struct CMTriple {
    std::size_t n = 0;
    ScalarMatrix X, Y;

    CMTriple() = default;
    CMTriple(ScalarMatrix x, ScalarMatrix y) : n(x.size()), X(std::move(x)), Y(std::move(y)) {
        for (const auto* m : {&X, &Y}) {
            if (m->size() != n) throw DomainError("X and Y must have the same size");
            for (const auto& r : *m)
                if (r.size() != n) throw DomainError("matrices must be square");
        }
    }

    /// [X, Y] + I
    ScalarMatrix defect() const {
        return mat_add(mat_add(mat_mul(X, Y), mat_mul(Y, X), Scalar(-1)), identity_matrix(n));
    }

    friend bool operator==(const CMTriple& a, const CMTriple& b) { return a.X == b.X && a.Y == b.Y; }
};

/// rank([X, Y] + I) == 1; the empty triple passes.
inline bool rank_one_check(const CMTriple& t) {
    if (t.n == 0) return true;
    ScalarMatrix c = t.defect();
    if (trace(c) != Scalar(static_cast<long>(t.n))) throw ConsistencyError("trace of [X, Y] + I is not n");
    return rank(c) == 1;
}

/// (X + p'(Y), Y)
inline CMTriple gamma_act_cm(const CMTriple& t, const Poly& p) {
    if (!rank_one_check(t)) throw DomainError("input pair fails the rank-one condition");
    if (t.n == 0) return t;
    return CMTriple(mat_add(t.X, poly_of_matrix(p.derivative(), t.Y)), t.Y);
}

/// (g X g^-1, g Y g^-1)
inline CMTriple conjugate_cm(const CMTriple& t, const ScalarMatrix& g) {
    ScalarMatrix gi = mat_inverse(g);
    return CMTriple(mat_mul(mat_mul(g, t.X), gi), mat_mul(mat_mul(g, t.Y), gi));
}

/// Y = diag(y), X_ij = 1/(y_j - y_i) off the diagonal, X_ii = d_i.
inline CMTriple cm_from_spectrum(const std::vector<Scalar>& y, const std::vector<Scalar>& d) {
    const std::size_t n = y.size();
    if (d.size() != n) throw DomainError("need one diagonal entry per eigenvalue");
    ScalarMatrix X(n, Vec<Scalar>(n, Scalar(0))), Y(n, Vec<Scalar>(n, Scalar(0)));
    for (std::size_t i = 0; i < n; ++i) {
        Y[i][i] = y[i];
        X[i][i] = d[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (y[i] == y[j]) throw DomainError("eigenvalues must be distinct");
            X[i][j] = 1 / Scalar(y[j] - y[i]);
        }
    }
    return CMTriple(std::move(X), std::move(Y));
}

/// tr W(X, Y) for every word of length 1..max_len, keyed by the word.
inline std::map<std::string, Scalar> trace_words(const CMTriple& t, int max_len) {
    std::map<std::string, Scalar> out;
    std::vector<std::pair<std::string, ScalarMatrix>> layer{{"", identity_matrix(t.n)}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::pair<std::string, ScalarMatrix>> next;
        for (const auto& [w, m] : layer) {
            next.emplace_back(w + "X", mat_mul(m, t.X));
            next.emplace_back(w + "Y", mat_mul(m, t.Y));
        }
        for (const auto& [w, m] : next) out[w] = trace(m);
        layer = std::move(next);
    }
    return out;
}

/// Necessary condition for the pairs to be simultaneously conjugate.
inline bool same_trace_words(const CMTriple& a, const CMTriple& b, int max_len) {
    return a.n == b.n && trace_words(a, max_len) == trace_words(b, max_len);
}

} // namespace fcw
