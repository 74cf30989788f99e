#pragma once

#include "qtorus/error.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace qtorus {

/// Dense row-major matrix over an exact field (or any ring for the
/// arithmetic-only members).
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto &row : init) {
            if (row.size() != cols_) throw Error(ErrorKind::InvalidArgument, "ragged matrix literal");
            for (const auto &x : row) data_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Block at (row, col) of the given size.
    Matrix block(std::size_t row, std::size_t col, std::size_t nrows, std::size_t ncols) const {
        Matrix b(nrows, ncols);
        for (std::size_t i = 0; i < nrows; ++i)
            for (std::size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(row + i, col + j);
        return b;
    }

    void set_block(std::size_t row, std::size_t col, const Matrix &b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(row + i, col + j) = b(i, j);
    }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        if (a.cols_ != b.rows_) throw Error(ErrorKind::InvalidArgument, "matrix shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T &aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Matrix operator+(const Matrix &a, const Matrix &b) {
        Matrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
        return c;
    }

    friend Matrix operator-(const Matrix &a, const Matrix &b) {
        Matrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
        return c;
    }

    friend Matrix operator-(const Matrix &a) {
        Matrix c = a;
        for (auto &x : c.data_) x = -x;
        return c;
    }

    friend bool operator==(const Matrix &a, const Matrix &b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// Inverse by Gauss-Jordan elimination; nullopt when singular.
    std::optional<Matrix> inverse() const {
        if (rows_ != cols_) throw Error(ErrorKind::InvalidArgument, "inverse of non-square matrix");
        const std::size_t n = rows_;
        Matrix a = *this;
        Matrix inv = identity(n);
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t pivot = c;
            while (pivot < n && a(pivot, c) == 0) ++pivot;
            if (pivot == n) return std::nullopt;
            if (pivot != c) {
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(a(c, j), a(pivot, j));
                    std::swap(inv(c, j), inv(pivot, j));
                }
            }
            T p = a(c, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(c, j) /= p;
                inv(c, j) /= p;
            }
            for (std::size_t r = 0; r < n; ++r) {
                if (r == c || a(r, c) == 0) continue;
                T f = a(r, c);
                for (std::size_t j = 0; j < n; ++j) {
                    a(r, j) -= f * a(c, j);
                    inv(r, j) -= f * inv(c, j);
                }
            }
        }
        return inv;
    }

    T determinant() const {
        if (rows_ != cols_) throw Error(ErrorKind::InvalidArgument, "determinant of non-square matrix");
        const std::size_t n = rows_;
        Matrix a = *this;
        T det(1);
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t pivot = c;
            while (pivot < n && a(pivot, c) == 0) ++pivot;
            if (pivot == n) return T(0);
            if (pivot != c) {
                for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(pivot, j));
                det = -det;
            }
            det *= a(c, c);
            for (std::size_t r = c + 1; r < n; ++r) {
                if (a(r, c) == 0) continue;
                T f = a(r, c) / a(c, c);
                for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
            }
        }
        return det;
    }

    /// Exact rank by row reduction.
    std::size_t rank() const {
        Matrix a = *this;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t pivot = r;
            while (pivot < rows_ && a(pivot, c) == 0) ++pivot;
            if (pivot == rows_) continue;
            if (pivot != r)
                for (std::size_t j = 0; j < cols_; ++j) std::swap(a(r, j), a(pivot, j));
            for (std::size_t i = r + 1; i < rows_; ++i) {
                if (a(i, c) == 0) continue;
                T f = a(i, c) / a(r, c);
                for (std::size_t j = c; j < cols_; ++j) a(i, j) -= f * a(r, j);
            }
            ++r;
        }
        return r;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

} // namespace qtorus
