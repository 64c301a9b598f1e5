#pragma once

#include "carnot/scalar.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace carnot {

/// Small dense row-major matrix. Sizes here are algebra dimensions (tens at most).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }
  void set_column(std::size_t c, const std::vector<T>& values) {
    if (values.size() != rows_) throw std::invalid_argument("column length mismatch");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
  }

  std::vector<T> operator*(const std::vector<T>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector size mismatch");
    std::vector<T> out(rows_, T(0));
    for (std::size_t r = 0; r < rows_; ++r) {
      T acc(0);
      for (std::size_t c = 0; c < cols_; ++c) {
        if (!is_zero((*this)(r, c))) acc += (*this)(r, c) * v[c];
      }
      out[r] = acc;
    }
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product size mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Exact rank by fraction-free (Bareiss) elimination with full pivoting.
/// Rows are first scaled to integers, so no rational arithmetic happens inside the loop.
std::size_t exact_rank(const Matrix<Rational>& m);

/// Exact determinant (square matrices), same elimination scheme.
Rational exact_determinant(const Matrix<Rational>& m);

/// Exact inverse by Gauss-Jordan; throws std::domain_error when singular.
Matrix<Rational> exact_inverse(const Matrix<Rational>& m);

Matrix<double> to_double(const Matrix<Rational>& m);

}  // namespace carnot
