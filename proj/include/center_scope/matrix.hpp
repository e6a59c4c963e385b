// Copyright 2026 The center_scope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "center_scope/errors.hpp"
#include "center_scope/rational.hpp"

namespace center_scope {

// Dense row-major matrix. Entries are value types; no expression templates.
template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw InvalidArgument("matrix data length does not match shape");
    }
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw InvalidArgument("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n, const T& zero = T(0), const T& one = T(1)) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
    return out;
  }

  const std::vector<T>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_, data_.empty() ? T() : data_[0]);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }

  // Submatrix on the given rows and columns, in the order given.
  Matrix select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
    std::vector<T> out;
    out.reserve(row_idx.size() * col_idx.size());
    for (auto i : row_idx)
      for (auto j : col_idx) out.push_back((*this)(i, j));
    return Matrix(row_idx.size(), col_idx.size(), std::move(out));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<BigInt>;
using RatMatrix = Matrix<BigRational>;

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("matrix product shape mismatch");
  Matrix<T> out(a.rows(), b.cols(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

// A * A^T.
template <class T>
Matrix<T> gram(const Matrix<T>& a) {
  return multiply(a, a.transpose());
}

inline RatMatrix to_rational(const IntMatrix& m) {
  std::vector<BigRational> out;
  out.reserve(m.rows() * m.cols());
  for (const auto& x : m.data()) out.emplace_back(x);
  return RatMatrix(m.rows(), m.cols(), std::move(out));
}

template <class I>
IntMatrix to_big(const Matrix<I>& m) {
  std::vector<BigInt> out;
  out.reserve(m.rows() * m.cols());
  for (const auto& x : m.data()) out.push_back(to_bigint(static_cast<std::int64_t>(x)));
  return IntMatrix(m.rows(), m.cols(), std::move(out));
}

inline Matrix<std::int64_t> to_int64(const IntMatrix& m) {
  std::vector<std::int64_t> out;
  out.reserve(m.rows() * m.cols());
  for (const auto& x : m.data()) out.push_back(to_int64(x));
  return Matrix<std::int64_t>(m.rows(), m.cols(), std::move(out));
}

// Strictly increasing positions into an ambient index range.
struct IndexSubset {
  std::vector<std::size_t> indices;
  std::size_t ambient = 0;

  IndexSubset() = default;
  IndexSubset(std::vector<std::size_t> idx, std::size_t ambient_size)
      : indices(std::move(idx)), ambient(ambient_size) {
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] >= ambient || (i > 0 && indices[i] <= indices[i - 1])) {
        throw InvalidArgument("index subset must be strictly increasing and in range");
      }
    }
  }
  std::size_t size() const { return indices.size(); }
  friend bool operator==(const IndexSubset&, const IndexSubset&) = default;
};

}  // namespace center_scope
