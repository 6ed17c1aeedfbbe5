#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "floerq/error.hpp"

namespace floerq {

using BigInt = boost::multiprecision::cpp_int;

/// Dense row-major matrix of arbitrary-precision integers.
class BigMatrix {
public:
    BigMatrix() = default;
    BigMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static BigMatrix identity(std::size_t n)
    {
        BigMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    BigInt& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const BigInt& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::vector<BigInt> column(std::size_t c) const
    {
        std::vector<BigInt> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            v[r] = (*this)(r, c);
        return v;
    }

    friend BigMatrix operator*(const BigMatrix& x, const BigMatrix& y)
    {
        if (x.cols_ != y.rows_)
            throw Error(ErrorKind::shape, "matrix product dimension mismatch");
        BigMatrix z(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                const BigInt& xik = x(i, k);
                if (xik == 0)
                    continue;
                for (std::size_t j = 0; j < y.cols_; ++j)
                    z(i, j) += xik * y(k, j);
            }
        return z;
    }

    std::vector<BigInt> operator*(const std::vector<BigInt>& v) const
    {
        if (v.size() != cols_)
            throw Error(ErrorKind::shape, "matrix-vector dimension mismatch");
        std::vector<BigInt> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (v[j] != 0)
                    out[i] += (*this)(i, j) * v[j];
        return out;
    }

    bool is_zero() const
    {
        for (const auto& x : a_)
            if (x != 0)
                return false;
        return true;
    }

    friend bool operator==(const BigMatrix&, const BigMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> a_;
};

/// U * A * V = D with U, V unimodular and D diagonal, d_0 | d_1 | ... | d_{r-1}.
struct SmithForm {
    BigMatrix U;
    BigMatrix U_inverse;
    BigMatrix V;
    std::vector<BigInt> diagonal; // the r nonzero invariant factors, positive
    std::size_t rank() const { return diagonal.size(); }
};

namespace detail {

inline void swap_rows(BigMatrix& m, std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (std::size_t c = 0; c < m.cols(); ++c)
        std::swap(m(a, c), m(b, c));
}

inline void swap_cols(BigMatrix& m, std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (std::size_t r = 0; r < m.rows(); ++r)
        std::swap(m(r, a), m(r, b));
}

// row[dst] += f * row[src]
inline void add_row(BigMatrix& m, std::size_t dst, std::size_t src, const BigInt& f)
{
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (m(src, c) != 0)
            m(dst, c) += f * m(src, c);
}

// col[dst] += f * col[src]
inline void add_col(BigMatrix& m, std::size_t dst, std::size_t src, const BigInt& f)
{
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (m(r, src) != 0)
            m(r, dst) += f * m(r, src);
}

// Floor-free quotient toward zero is fine here: only the remainder size matters.
inline BigInt quotient(const BigInt& a, const BigInt& b) { return a / b; }

} // namespace detail

/// Smith normal form with both transforms and the inverse of the left one.
inline SmithForm smith_normal_form(BigMatrix a)
{
    using namespace detail;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    SmithForm out{BigMatrix::identity(m), BigMatrix::identity(m), BigMatrix::identity(n), {}};
    BigMatrix& U = out.U;
    BigMatrix& Ui = out.U_inverse;
    BigMatrix& V = out.V;

    // Row operations are mirrored on U (as rows) and on U^{-1} (as inverse column ops).
    auto row_swap = [&](std::size_t i, std::size_t j) {
        swap_rows(a, i, j);
        swap_rows(U, i, j);
        swap_cols(Ui, i, j);
    };
    auto row_add = [&](std::size_t dst, std::size_t src, const BigInt& f) {
        add_row(a, dst, src, f);
        add_row(U, dst, src, f);
        add_col(Ui, src, dst, -f);
    };
    auto row_negate = [&](std::size_t i) {
        for (std::size_t c = 0; c < n; ++c)
            a(i, c) = -a(i, c);
        for (std::size_t c = 0; c < m; ++c)
            U(i, c) = -U(i, c);
        for (std::size_t r = 0; r < m; ++r)
            Ui(r, i) = -Ui(r, i);
    };
    auto col_swap = [&](std::size_t i, std::size_t j) {
        swap_cols(a, i, j);
        swap_cols(V, i, j);
    };
    auto col_add = [&](std::size_t dst, std::size_t src, const BigInt& f) {
        add_col(a, dst, src, f);
        add_col(V, dst, src, f);
    };

    std::size_t t = 0;
    while (t < m && t < n) {
        // Pivot: smallest nonzero magnitude in the trailing block.
        std::optional<std::pair<std::size_t, std::size_t>> pivot;
        BigInt best;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (a(i, j) != 0) {
                    BigInt mag = abs(a(i, j));
                    if (!pivot || mag < best) {
                        best = mag;
                        pivot = {i, j};
                    }
                }
        if (!pivot)
            break;
        row_swap(t, pivot->first);
        col_swap(t, pivot->second);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a(i, t) == 0)
                    continue;
                BigInt q = quotient(a(i, t), a(t, t));
                row_add(i, t, -q);
                if (a(i, t) != 0) {
                    row_swap(t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a(t, j) == 0)
                    continue;
                BigInt q = quotient(a(t, j), a(t, t));
                col_add(j, t, -q);
                if (a(t, j) != 0) {
                    col_swap(t, j);
                    clean = false;
                }
            }
            if (!clean)
                continue;
            // Divisibility of the trailing block by the pivot.
            for (std::size_t i = t + 1; i < m && clean; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        row_add(t, i, 1);
                        clean = false;
                        break;
                    }
        }
        if (a(t, t) < 0)
            row_negate(t);
        out.diagonal.push_back(a(t, t));
        ++t;
    }
    return out;
}

/// Rank of an integer matrix (over Q).
inline std::size_t integer_rank(const BigMatrix& a) { return smith_normal_form(a).rank(); }

/// A saturated basis of ker(A) ⊂ Z^n, as columns.
inline BigMatrix kernel_basis(const BigMatrix& a)
{
    SmithForm s = smith_normal_form(a);
    const std::size_t n = a.cols();
    BigMatrix k(n, n - s.rank());
    for (std::size_t c = s.rank(); c < n; ++c)
        for (std::size_t r = 0; r < n; ++r)
            k(r, c - s.rank()) = s.V(r, c);
    return k;
}

/// Integer solution x of A x = b, if one exists.
inline std::optional<std::vector<BigInt>> solve_integer(const BigMatrix& a, const std::vector<BigInt>& b)
{
    if (b.size() != a.rows())
        throw Error(ErrorKind::shape, "solve_integer: right-hand side has wrong length");
    SmithForm s = smith_normal_form(a);
    std::vector<BigInt> ub = s.U * b;
    std::vector<BigInt> y(a.cols());
    for (std::size_t i = 0; i < ub.size(); ++i) {
        if (i < s.rank()) {
            if (ub[i] % s.diagonal[i] != 0)
                return std::nullopt;
            y[i] = ub[i] / s.diagonal[i];
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return s.V * y;
}

} // namespace floerq
