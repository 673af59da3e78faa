#pragma once

#include "voganish/exactcore/ratfunc.hpp"

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace voganish::exactcore {

// Dense row-major matrix over a commutative ring E.
template <class E>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), data_(r * c, E(0)) {}
  Matrix(std::initializer_list<std::initializer_list<E>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = E(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  E& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const E& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch in product");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const E& a = (*this)(i, k);
        if (coeff_is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          if (!coeff_is_zero(o(k, j))) r(i, j) += a * o(k, j);
      }
    return r;
  }
  Matrix operator+(const Matrix& o) const { return zip(o, [](const E& a, const E& b) { return E(a + b); }); }
  Matrix operator-(const Matrix& o) const { return zip(o, [](const E& a, const E& b) { return E(a - b); }); }
  Matrix scaled(const E& c) const {
    Matrix r = *this;
    for (auto& x : r.data_) x = x * c;
    return r;
  }
  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }
  bool is_zero() const {
    for (const auto& x : data_)
      if (!coeff_is_zero(x)) return false;
    return true;
  }

  Matrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    Matrix r(rs.size(), cs.size());
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j) r(i, j) = (*this)(rs[i], cs[j]);
    return r;
  }
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix r(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
    return r;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void append_row(const std::vector<E>& row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw std::invalid_argument("row length mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
  }
  std::vector<E> row(std::size_t i) const { return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_}; }
  std::vector<E> col(std::size_t j) const {
    std::vector<E> c;
    c.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }

  template <class D, class F>
  Matrix<D> map(F&& f) const {
    Matrix<D> r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
    return r;
  }

 private:
  template <class F>
  Matrix zip(const Matrix& o, F&& f) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
    Matrix r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = f(data_[k], o.data_[k]);
    return r;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<E> data_;
};

using QMatrix = Matrix<Rat>;
using PolyMatrix = Matrix<QPoly>;
using RMatrix = Matrix<RatFunc>;
using RPolyMatrix = Matrix<RPoly>;

}  // namespace voganish::exactcore
