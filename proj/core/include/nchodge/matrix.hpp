#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nchodge/error.hpp"
#include "nchodge/scalar.hpp"

namespace nchodge {

/// Dense row-major matrix over a scalar field. Exact fields get exact
/// elimination; the float field routes rank questions through Eigen.
template <class S>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, from_int<S>(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = from_int<S>(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const S> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    const std::vector<S>& data() const { return data_; }

    std::vector<S> column(std::size_t j) const {
        std::vector<S> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_column(std::size_t j, std::span<const S> c) {
        assert(c.size() == rows_);
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Matrix& operator*=(const S& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
    friend Matrix operator*(const S& s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) {
            throw Error("matrix", "ShapeMismatch", "matrix product shape mismatch");
        }
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& aik = a(i, k);
                if (is_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    if (!is_zero(b(k, j))) c(i, j) += aik * b(k, j);
                }
            }
        }
        return c;
    }

    friend std::vector<S> operator*(const Matrix& a, std::span<const S> v) {
        if (a.cols_ != v.size()) {
            throw Error("matrix", "ShapeMismatch", "matrix-vector shape mismatch");
        }
        std::vector<S> out(a.rows_, from_int<S>(0));
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < a.cols_; ++j) {
                if (!is_zero(a(i, j)) && !is_zero(v[j])) out[i] += a(i, j) * v[j];
            }
        }
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    bool is_zero_matrix() const {
        return std::all_of(data_.begin(), data_.end(), [](const S& x) { return is_zero(x); });
    }

    /// Largest entry modulus, as a double; exact zero matrices give exactly 0.
    double max_abs() const {
        double m = 0.0;
        for (const auto& x : data_) m = std::max(m, ScalarTraits<S>::abs(x));
        return m;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix adjoint() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = ScalarTraits<S>::conj((*this)(i, j));
        return t;
    }

    Eigen::MatrixXcd to_eigen() const {
        Eigen::MatrixXcd m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = to_complex((*this)(i, j));
        return m;
    }

    template <class T>
    Matrix<T> cast() const {
        Matrix<T> m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = convert_scalar<T>((*this)(i, j));
        return m;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw Error("matrix", "ShapeMismatch", "matrix sum shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<S> data_;
};

template <class S>
Matrix<S> matrix_power(const Matrix<S>& m, unsigned exponent) {
    Matrix<S> result = Matrix<S>::identity(m.rows());
    Matrix<S> base = m;
    while (exponent > 0) {
        if (exponent & 1U) result = result * base;
        exponent >>= 1U;
        if (exponent > 0) base = base * base;
    }
    return result;
}

/// Horizontal concatenation; both blocks must have the same row count.
template <class S>
Matrix<S> hstack(const Matrix<S>& a, const Matrix<S>& b) {
    if (a.rows() != b.rows()) throw Error("matrix", "ShapeMismatch", "hstack row mismatch");
    Matrix<S> m(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

template <class S>
Matrix<S> from_columns(std::size_t rows, const std::vector<std::vector<S>>& columns) {
    Matrix<S> m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
    return m;
}

inline Matrix<Complex> from_eigen(const Eigen::MatrixXcd& e) {
    Matrix<Complex> m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
    return m;
}

/// Numerical rank of a float matrix: singular values above
/// max(rel_tol * sigma_max, abs_floor).
inline std::size_t numerical_rank(const Eigen::MatrixXcd& m, double rel_tol, double abs_floor = 1e-12) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cutoff = std::max(rel_tol * sv(0), abs_floor);
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    return r;
}

/// Reduced row echelon form over an exact field; returns pivot columns.
template <class S>
std::vector<std::size_t> rref_in_place(Matrix<S>& m) {
    static_assert(ScalarTraits<S>::exact, "rref requires an exact field");
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && is_zero(m(p, c))) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        const S inv = from_int<S>(1) / m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || is_zero(m(i, c))) continue;
            const S f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!is_zero(m(r, j))) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

/// Rank: exact elimination for exact fields, SVD with rel_tol for floats.
template <class S>
std::size_t rank(const Matrix<S>& m, double rel_tol = 1e-10) {
    if (m.empty()) return 0;
    if constexpr (ScalarTraits<S>::exact) {
        Matrix<S> copy = m;
        return rref_in_place(copy).size();
    } else {
        return numerical_rank(m.to_eigen(), rel_tol);
    }
}

/// Basis of the null space (columns). Exact fields only.
template <class S>
Matrix<S> kernel_basis(const Matrix<S>& m) {
    static_assert(ScalarTraits<S>::exact, "kernel_basis requires an exact field");
    Matrix<S> r = m;
    const auto pivots = rref_in_place(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<S>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<S> v(m.cols(), from_int<S>(0));
        v[free] = from_int<S>(1);
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, free);
        basis.push_back(std::move(v));
    }
    return from_columns(m.cols(), basis);
}

/// Inverse of a square matrix over an exact field; throws if singular.
template <class S>
Matrix<S> inverse(const Matrix<S>& m) {
    static_assert(ScalarTraits<S>::exact, "inverse requires an exact field");
    if (m.rows() != m.cols()) throw Error("matrix", "ShapeMismatch", "inverse of a non-square matrix");
    Matrix<S> aug = hstack(m, Matrix<S>::identity(m.rows()));
    const auto pivots = rref_in_place(aug);
    if (pivots.size() < m.rows() || (pivots.size() > 0 && pivots.back() >= m.cols())) {
        throw Error("matrix", "Singular", "matrix is singular");
    }
    Matrix<S> inv(m.rows(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.rows(); ++j) inv(i, j) = aug(i, m.rows() + j);
    return inv;
}

/// True when every column of `vectors` lies in the column space of `a`.
template <class S>
bool in_column_space(const Matrix<S>& a, const Matrix<S>& vectors, double rel_tol = 1e-10) {
    if (vectors.cols() == 0) return true;
    if (a.cols() == 0) return vectors.is_zero_matrix() || (!ScalarTraits<S>::exact && vectors.max_abs() < rel_tol);
    if constexpr (ScalarTraits<S>::exact) {
        return rank(hstack(a, vectors)) == rank(a);
    } else {
        // Least-squares residual relative to the data scale.
        const Eigen::MatrixXcd ae = a.to_eigen();
        const Eigen::MatrixXcd ve = vectors.to_eigen();
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(ae);
        cod.setThreshold(rel_tol);
        const Eigen::MatrixXcd x = cod.solve(ve);
        const double scale = std::max({1.0, ae.norm(), ve.norm()});
        return (ae * x - ve).norm() <= 1e-8 * scale;
    }
}

}  // namespace nchodge
