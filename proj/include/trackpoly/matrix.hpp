#pragma once

#include "trackpoly/errors.hpp"
#include "trackpoly/numeric.hpp"

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace trackpoly {

/// Dense row-major matrix over an exact ring (Integer or Rational).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (v != 0) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b);
    Matrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += b.data_[k];
    return r;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b);
    Matrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= b.data_[k];
    return r;
  }

  friend Matrix operator-(const Matrix& a) {
    Matrix r = a;
    for (auto& v : r.data_) v = -v;
    return r;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("matrix product shape mismatch: " + a.shape() + " * " + b.shape());
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix r = a;
    for (auto& v : r.data_) v *= s;
    return r;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  static void check_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("matrix shape mismatch: " + a.shape() + " vs " + b.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(const IntMatrix& m);
/// Throws InvariantError if some entry is not an integer.
IntMatrix to_integer(const RatMatrix& m);

template <class T>
Matrix<T> power(const Matrix<T>& m, unsigned n) {
  Matrix<T> result = Matrix<T>::identity(m.rows());
  Matrix<T> base = m;
  while (n) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

/// Block matrix [[a, b], [c, d]].
template <class T>
Matrix<T> block(const Matrix<T>& a, const Matrix<T>& b, const Matrix<T>& c, const Matrix<T>& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
    throw std::invalid_argument("block shapes do not fit");
  Matrix<T> r(a.rows() + c.rows(), a.cols() + b.cols());
  auto put = [&r](const Matrix<T>& m, std::size_t r0, std::size_t c0) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) r(r0 + i, c0 + j) = m(i, j);
  };
  put(a, 0, 0);
  put(b, 0, a.cols());
  put(c, a.rows(), 0);
  put(d, a.rows(), a.cols());
  return r;
}

/// Reduced row echelon form; `pivots` receives the pivot column of each nonzero row.
RatMatrix rref(const RatMatrix& m, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(const RatMatrix& m);
inline std::size_t rank(const IntMatrix& m) { return rank(to_rational(m)); }

/// Basis of the right kernel. Each vector is scaled to coprime integers with
/// its first nonzero entry positive; vectors are ordered by their free column.
std::vector<std::vector<Integer>> kernel_basis(const RatMatrix& m);
inline std::vector<std::vector<Integer>> kernel_basis(const IntMatrix& m) {
  return kernel_basis(to_rational(m));
}

/// Columns -> matrix.
IntMatrix from_columns(const std::vector<std::vector<Integer>>& columns, std::size_t rows);

/// Inverse of a square matrix; throws InvariantError when singular.
RatMatrix inverse(const RatMatrix& m);

/// Unique X with basis * X == target, where basis has independent columns.
/// Throws InvariantError when the columns of target are not in the column span.
RatMatrix solve_in_span(const RatMatrix& basis, const RatMatrix& target);

Rational determinant(const RatMatrix& m);
Integer determinant(const IntMatrix& m);

std::string to_string(const IntMatrix& m);
std::string to_string(const RatMatrix& m);

/// Integer matrix in the text format: optional '#' comment lines, a line
/// "rows cols", then the rows as space-separated integers.
IntMatrix parse_matrix(const std::string& text);
IntMatrix load_matrix(const std::string& path);

}  // namespace trackpoly
