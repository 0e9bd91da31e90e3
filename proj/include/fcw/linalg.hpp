#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "fcw/ratfunc.hpp"

namespace fcw {

inline bool field_is_zero(const Scalar& s) { return sgn(s) == 0; }
inline bool field_is_zero(const RationalFunction& f) { return f.is_zero(); }

template <class F>
using Vec = std::vector<F>;

template <class F>
using Matrix = std::vector<Vec<F>>;

/// Result of reduced row echelon form: the nonzero rows, with pivots[i] the
/// pivot column of rows[i]. Pivot entries are 1 and pivot columns are zero in
/// every other row.
template <class F>
struct Echelon {
    Matrix<F> rows;
    std::vector<std::size_t> pivots;

    std::size_t rank() const { return rows.size(); }
};

/// Row-reduces `m`. Columns are swept in the order given by `column_order`
/// (all columns, a permutation); earlier columns get pivots first, so the
/// pivot of each row is its first nonzero entry in that order.
template <class F>
Echelon<F> rref(Matrix<F> m, const std::vector<std::size_t>& column_order) {
    Echelon<F> e;
    std::size_t next = 0;
    for (std::size_t col : column_order) {
        std::size_t piv = next;
        while (piv < m.size() && field_is_zero(m[piv][col])) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[next]);
        Vec<F>& prow = m[next];
        const F inv = F(1) / prow[col];
        for (auto& v : prow)
            if (!field_is_zero(v)) v = v * inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == next || field_is_zero(m[r][col])) continue;
            const F f = m[r][col];
            for (std::size_t c = 0; c < prow.size(); ++c)
                if (!field_is_zero(prow[c])) m[r][c] = m[r][c] - f * prow[c];
        }
        e.pivots.push_back(col);
        ++next;
        if (next == m.size()) break;
    }
    m.resize(next);
    e.rows = std::move(m);
    return e;
}

template <class F>
Echelon<F> rref(Matrix<F> m) {
    std::vector<std::size_t> order(m.empty() ? 0 : m.front().size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    return rref(std::move(m), order);
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
    return rref(m).rank();
}

/// Basis of {v : m v = 0}; `ncols` is needed when m has no rows.
template <class F>
Matrix<F> nullspace(const Matrix<F>& m, std::size_t ncols) {
    Echelon<F> e = rref(m);
    std::vector<bool> is_pivot(ncols, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    Matrix<F> basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        Vec<F> v(ncols, F(0));
        v[free] = F(1);
        for (std::size_t r = 0; r < e.rows.size(); ++r) v[e.pivots[r]] = -e.rows[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Unique solution of the square system m v = rhs, or nullopt if singular.
template <class F>
std::optional<Vec<F>> solve_unique(const Matrix<F>& m, const Vec<F>& rhs) {
    const std::size_t n = rhs.size();
    Matrix<F> aug = m;
    for (std::size_t r = 0; r < n; ++r) aug[r].push_back(rhs[r]);
    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Echelon<F> e = rref(std::move(aug), order);
    if (e.rank() != n) return std::nullopt;
    for (std::size_t r = 0; r < n; ++r)
        if (e.pivots[r] != r) return std::nullopt;
    Vec<F> v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = e.rows[r][n];
    return v;
}

/// True when every row of `sub` lies in the row space of `space`.
template <class F>
bool row_space_contains(const Matrix<F>& space, const Matrix<F>& sub) {
    if (sub.empty()) return true;
    Matrix<F> both = space;
    both.insert(both.end(), sub.begin(), sub.end());
    return rank(both) == rank(space);
}

} // namespace fcw
