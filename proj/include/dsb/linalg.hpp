#ifndef DSB_LINALG_HPP
#define DSB_LINALG_HPP

#include <optional>
#include <vector>

#include "dsb/univariate.hpp"

namespace dsb {

// Dense matrix over a field context. Row-major.
template <class F>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<typename F::Elt> a;

    Mat() = default;
    Mat(const F& K, std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, K.zero()) {}

    typename F::Elt& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const typename F::Elt& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

template <class F>
Mat<F> mat_identity(const F& K, std::size_t n) {
    Mat<F> m(K, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = K.one();
    return m;
}

template <class F>
bool mat_equal(const F& K, const Mat<F>& x, const Mat<F>& y) {
    if (x.rows != y.rows || x.cols != y.cols) return false;
    for (std::size_t i = 0; i < x.a.size(); ++i)
        if (!K.is_zero(K.sub(x.a[i], y.a[i]))) return false;
    return true;
}

// In-place reduced row echelon form. Returns pivot columns in order.
template <class F>
std::vector<std::size_t> mat_rref(const F& K, Mat<F>& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && K.is_zero(m.at(sel, col))) ++sel;
        if (sel == m.rows) continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(row, j));
        auto piv_inv = K.inv(m.at(row, col));
        for (std::size_t j = col; j < m.cols; ++j) m.at(row, j) = K.mul(m.at(row, j), piv_inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || K.is_zero(m.at(i, col))) continue;
            auto f = m.at(i, col);
            for (std::size_t j = col; j < m.cols; ++j)
                m.at(i, j) = K.sub(m.at(i, j), K.mul(f, m.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class F>
std::size_t mat_rank(const F& K, Mat<F> m) {
    return mat_rref(K, m).size();
}

// Basis of the right kernel {x : m x = 0}; each vector has length m.cols.
// Deterministic: the standard free-column parameterization of the RREF.
template <class F>
std::vector<std::vector<typename F::Elt>> mat_kernel(const F& K, Mat<F> m) {
    auto pivots = mat_rref(K, m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<typename F::Elt>> basis;
    for (std::size_t free_col = 0; free_col < m.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<typename F::Elt> v(m.cols, K.zero());
        v[free_col] = K.one();
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = K.neg(m.at(r, free_col));
        basis.push_back(std::move(v));
    }
    return basis;
}

// One solution of m x = b, if any.
template <class F>
std::optional<std::vector<typename F::Elt>> mat_solve(const F& K, Mat<F> m,
                                                      std::vector<typename F::Elt> b) {
    if (b.size() != m.rows) throw std::invalid_argument("mat_solve: size mismatch");
    Mat<F> aug(K, m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[i];
    }
    auto pivots = mat_rref(K, aug);
    if (!pivots.empty() && pivots.back() == m.cols) return std::nullopt;  // inconsistent
    std::vector<typename F::Elt> x(m.cols, K.zero());
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, m.cols);
    return x;
}

// Canonical basis of the row space: RREF rows with zero rows dropped. Two
// inputs span the same subspace iff their canonical bases are equal, which is
// what makes subspace certificates deduplicable.
template <class F>
Mat<F> mat_row_space_canonical(const F& K, Mat<F> m) {
    auto pivots = mat_rref(K, m);
    Mat<F> out(K, pivots.size(), m.cols);
    for (std::size_t r = 0; r < pivots.size(); ++r)
        for (std::size_t j = 0; j < m.cols; ++j) out.at(r, j) = m.at(r, j);
    return out;
}

// RREF of m together with the row transform: returns (R, T, pivots) with
// T * m = R and T invertible. Pivoting is restricted to the columns of m.
template <class F>
struct RrefTransform {
    Mat<F> R, T;
    std::vector<std::size_t> pivots;
};

template <class F>
RrefTransform<F> mat_rref_transform(const F& K, const Mat<F>& m) {
    Mat<F> aug(K, m.rows, m.cols + m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols + i) = K.one();
    }
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && K.is_zero(aug.at(sel, col))) ++sel;
        if (sel == m.rows) continue;
        if (sel != row)
            for (std::size_t j = 0; j < aug.cols; ++j) std::swap(aug.at(sel, j), aug.at(row, j));
        auto piv_inv = K.inv(aug.at(row, col));
        for (std::size_t j = 0; j < aug.cols; ++j) aug.at(row, j) = K.mul(aug.at(row, j), piv_inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || K.is_zero(aug.at(i, col))) continue;
            auto f = aug.at(i, col);
            for (std::size_t j = 0; j < aug.cols; ++j)
                aug.at(i, j) = K.sub(aug.at(i, j), K.mul(f, aug.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    RrefTransform<F> out;
    out.R = Mat<F>(K, m.rows, m.cols);
    out.T = Mat<F>(K, m.rows, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) out.R.at(i, j) = aug.at(i, j);
        for (std::size_t j = 0; j < m.rows; ++j) out.T.at(i, j) = aug.at(i, m.cols + j);
    }
    out.pivots = std::move(pivots);
    return out;
}

// Inverse of a square matrix; throws on singular input.
template <class F>
Mat<F> mat_inverse(const F& K, const Mat<F>& m) {
    if (m.rows != m.cols) throw std::invalid_argument("mat_inverse: not square");
    auto rt = mat_rref_transform(K, m);
    if (rt.pivots.size() != m.rows) throw std::invalid_argument("mat_inverse: singular matrix");
    return rt.T;
}

template <class F>
Mat<F> mat_mul(const F& K, const Mat<F>& x, const Mat<F>& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    Mat<F> z(K, x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (K.is_zero(x.at(i, k))) continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                z.at(i, j) = K.add(z.at(i, j), K.mul(x.at(i, k), y.at(k, j)));
        }
    return z;
}

// Rank of a matrix of univariate polynomials over F[x], i.e. over the
// function field F(x). Bareiss fraction-free elimination: every division is
// exact by the determinantal identity, so the result is certified exact and
// never depends on sampling luck (small prime fields have too few points for
// evaluation alone to be trustworthy).
template <class F>
std::size_t poly_mat_rank(const F& K, std::vector<std::vector<Poly1<F>>> m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    Poly1<F> prev_pivot = p1_const(K, K.one());
    std::size_t rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        // choose a pivot of minimal degree to keep the polynomials small
        std::size_t sel = rows;
        for (std::size_t i = row; i < rows; ++i) {
            if (m[i][col].is_zero()) continue;
            if (sel == rows || m[i][col].deg() < m[sel][col].deg()) sel = i;
        }
        if (sel == rows) continue;
        std::swap(m[sel], m[row]);
        for (std::size_t i = row + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) {
                auto num = p1_sub(K, p1_mul(K, m[row][col], m[i][j]), p1_mul(K, m[i][col], m[row][j]));
                m[i][j] = num.is_zero() ? num : p1_divexact(K, num, prev_pivot);
            }
            m[i][col] = p1_zero(K);
        }
        prev_pivot = m[row][col];
        ++rank;
        ++row;
    }
    return rank;
}

}  // namespace dsb

#endif
