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

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "center_scope/cyclotomic.hpp"
#include "center_scope/errors.hpp"
#include "center_scope/matrix.hpp"
#include "center_scope/rational.hpp"

namespace center_scope {

namespace detail {

// Exact division for the fraction-free integer types we use.
template <class I>
I exact_div(const I& a, const I& b) {
  if constexpr (std::is_same_v<I, BigInt>) {
    BigInt q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  } else {
    return a / b;
  }
}

}  // namespace detail

// Bareiss elimination on a copy; returns the rank over Q.
inline std::size_t rank_rational(const IntMatrix& m) {
  IntMatrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a(pivot, col) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(pivot, j), a(rank, j));
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) {
        a(i, j) = detail::exact_div(BigInt(a(rank, col) * a(i, j) - a(i, col) * a(rank, j)), prev);
      }
      a(i, col) = 0;
    }
    prev = a(rank, col);
    ++rank;
  }
  return rank;
}

// Exact determinant via Bareiss.
inline BigInt determinant(const IntMatrix& m) {
  if (!m.is_square()) throw InvalidArgument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = detail::exact_div(BigInt(a(k, k) * a(i, j) - a(i, k) * a(k, j)), prev);
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

struct MinorSelection {
  // permutation[pos] = original index; stable sort by diagonal entry.
  std::vector<std::size_t> permutation;
  // Positions into `permutation`.
  IndexSubset subset;

  // Original row/column indices of the chosen minor, in permuted order.
  std::vector<std::size_t> original_indices() const {
    std::vector<std::size_t> out;
    for (auto pos : subset.indices) out.push_back(permutation[pos]);
    return out;
  }
};

// Sort by increasing diagonal, then take the lexicographically least
// r-subset (in that order) whose principal minor is nonsingular.
inline MinorSelection select_nonsingular_minor(const IntMatrix& m, std::size_t r) {
  if (!m.is_symmetric()) throw InvalidArgument("select_nonsingular_minor needs a symmetric matrix");
  const std::size_t n = m.rows();
  if (r > n) throw InvalidArgument("requested minor larger than the matrix");
  MinorSelection sel;
  sel.permutation.resize(n);
  std::iota(sel.permutation.begin(), sel.permutation.end(), 0);
  std::stable_sort(sel.permutation.begin(), sel.permutation.end(),
                   [&](std::size_t a, std::size_t b) { return m(a, a) < m(b, b); });

  auto principal_det = [&](const std::vector<std::size_t>& positions) {
    std::vector<std::size_t> idx;
    for (auto p : positions) idx.push_back(sel.permutation[p]);
    return determinant(m.select(idx, idx));
  };

  // For a symmetric matrix of rank r, r linearly independent columns give a
  // nonsingular principal minor, and greedy choice yields the lex-least
  // independent set. The determinant check below confirms it exactly.
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  for (std::size_t pos = 0; pos < n && chosen.size() < r; ++pos) {
    auto trial = chosen;
    trial.push_back(pos);
    std::vector<std::size_t> cols;
    for (auto p : trial) cols.push_back(sel.permutation[p]);
    if (rank_rational(m.select(all_rows, cols)) == trial.size()) chosen = std::move(trial);
  }
  if (chosen.size() == r && principal_det(chosen) != 0) {
    sel.subset = IndexSubset(chosen, n);
    return sel;
  }

  // Exhaustive lexicographic fallback over r-combinations.
  std::vector<std::size_t> comb(r);
  std::iota(comb.begin(), comb.end(), 0);
  while (r > 0) {
    if (principal_det(comb) != 0) {
      sel.subset = IndexSubset(comb, n);
      return sel;
    }
    std::size_t i = r;
    while (i-- > 0) {
      if (comb[i] != i + n - r) break;
      if (i == 0) throw InvariantViolation("no nonsingular principal minor of the requested rank");
    }
    ++comb[i];
    for (std::size_t j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
  }
  sel.subset = IndexSubset({}, n);
  return sel;
}

// Solve A x = B over Q (A square nonsingular); throws on singular A.
inline RatMatrix solve_rational(const RatMatrix& a, const RatMatrix& b) {
  const std::size_t n = a.rows();
  if (!a.is_square() || b.rows() != n) throw InvalidArgument("solve_rational shape mismatch");
  RatMatrix lhs = a, rhs = b;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && lhs(p, col) == 0) ++p;
    if (p == n) throw InvalidArgument("singular matrix in rational solve");
    if (p != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lhs(p, j), lhs(col, j));
      for (std::size_t j = 0; j < rhs.cols(); ++j) std::swap(rhs(p, j), rhs(col, j));
    }
    const BigRational piv = lhs(col, col);
    for (std::size_t j = 0; j < n; ++j) lhs(col, j) /= piv;
    for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(col, j) /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || lhs(i, col) == 0) continue;
      const BigRational f = lhs(i, col);
      for (std::size_t j = 0; j < n; ++j) lhs(i, j) -= f * lhs(col, j);
      for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) -= f * rhs(col, j);
    }
  }
  return rhs;
}

// The unique R with M = R M' R^T and R[rows, :] = I, where
// M' = M[rows, rows]. `rows` lists original indices in minor order.
inline RatMatrix compute_reduction(const IntMatrix& m, std::span<const std::size_t> rows) {
  if (!m.is_symmetric()) throw InvalidArgument("compute_reduction needs a symmetric matrix");
  const RatMatrix mq = to_rational(m);
  const RatMatrix minor = mq.select(rows, rows);
  std::vector<std::size_t> all(m.rows());
  std::iota(all.begin(), all.end(), 0);
  // M[:, S] = R M'  =>  R^T = M'^{-1} M[S, :]  (M' symmetric).
  const RatMatrix rt = solve_rational(minor, mq.select(rows, all));
  RatMatrix r = rt.transpose();
  if (!(multiply(multiply(r, minor), r.transpose()) == mq)) {
    throw InvalidArgument("principal minor does not capture the full rank of M");
  }
  return r;
}

inline RatMatrix compute_reduction(const IntMatrix& m, const MinorSelection& sel) {
  const auto rows = sel.original_indices();
  return compute_reduction(m, rows);
}

// Fraction-free symmetric elimination with diagonal pivoting on a dense
// row-major n x n buffer, which is destroyed. After each step the trailing
// entries are (k+1)-minors, so pivots carry the sign of the Schur
// complement. I must hold the largest principal-minor-sized intermediate.
template <class I>
bool is_psd_fraction_free(std::span<I> a, std::size_t n) {
  std::vector<std::size_t> live(n);
  std::iota(live.begin(), live.end(), 0);
  I prev = 1;
  while (!live.empty()) {
    std::size_t best = 0;
    for (std::size_t t = 1; t < live.size(); ++t) {
      if (a[live[t] * n + live[t]] > a[live[best] * n + live[best]]) best = t;
    }
    const std::size_t p = live[best];
    const I piv = a[p * n + p];
    if (piv < 0) return false;
    if (piv == 0) {
      // All remaining diagonals are zero; PSD forces the rest to vanish.
      for (auto i : live)
        for (auto j : live)
          if (a[i * n + j] != 0) return false;
      return true;
    }
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(best));
    for (auto i : live) {
      for (auto j : live) {
        if (j < i) continue;
        I v = detail::exact_div(I(piv * a[i * n + j] - a[i * n + p] * a[p * n + j]), prev);
        a[i * n + j] = v;
        a[j * n + i] = v;
      }
    }
    prev = piv;
  }
  return true;
}

// Exact positive semidefiniteness via LDL^T with diagonal pivoting.
inline bool is_psd_exact(const RatMatrix& m) {
  if (!m.is_symmetric()) throw InvalidArgument("is_psd_exact needs a symmetric matrix");
  const std::size_t n = m.rows();
  // Clear denominators; scaling by a positive constant preserves PSD.
  BigInt lcm = 1;
  for (const auto& x : m.data()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  std::vector<BigInt> a;
  a.reserve(n * n);
  for (const auto& x : m.data()) a.push_back(BigInt(x.get_num() * (lcm / x.get_den())));
  return is_psd_fraction_free<BigInt>(std::span<BigInt>(a), n);
}

inline bool is_psd_exact(const IntMatrix& m) { return is_psd_exact(to_rational(m)); }

template <class T>
Eigen::MatrixXd to_eigen(const Matrix<T>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<T, BigInt> || std::is_same_v<T, BigRational>) {
        out(i, j) = m(i, j).get_d();
      } else {
        out(i, j) = static_cast<double>(m(i, j));
      }
    }
  return out;
}

inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InvariantViolation("symmetric eigensolver did not converge");
  return solver.eigenvalues();  // ascending
}

inline double min_eigenvalue_estimate(const IntMatrix& m) {
  if (!m.is_symmetric()) throw InvalidArgument("min_eigenvalue_estimate needs a symmetric matrix");
  if (m.rows() == 0) return 0.0;
  return symmetric_eigenvalues(to_eigen(m))(0);
}

inline double max_eigenvalue_estimate(const IntMatrix& m) {
  if (!m.is_symmetric()) throw InvalidArgument("max_eigenvalue_estimate needs a symmetric matrix");
  if (m.rows() == 0) return 0.0;
  const auto ev = symmetric_eigenvalues(to_eigen(m));
  return ev(ev.size() - 1);
}

// Zero/one of the same field as a sample element.
template <class T>
struct FieldTraits {
  static T zero_like(const T&) { return T(0); }
  static T one_like(const T&) { return T(1); }
  static T inverse(const T& x) { return T(1) / x; }
};

template <>
struct FieldTraits<CycloNumber> {
  static CycloNumber zero_like(const CycloNumber& x) { return CycloNumber(x.conductor()); }
  static CycloNumber one_like(const CycloNumber& x) { return CycloNumber(x.conductor(), BigRational(1)); }
  static CycloNumber inverse(const CycloNumber& x) { return inv(x); }
};

// Basis of the right nullspace, by reduced row echelon form over the field.
template <class T>
std::vector<std::vector<T>> field_kernel(const Matrix<T>& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (cols == 0) return {};
  const T sample = m(0, 0);
  using F = FieldTraits<T>;
  Matrix<T> a = m;
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a(p, c) == F::zero_like(sample)) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(p, j), a(r, j));
    const T piv_inv = F::inverse(a(r, c));
    for (std::size_t j = 0; j < cols; ++j) a(r, j) = a(r, j) * piv_inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == F::zero_like(sample)) continue;
      const T f = a(i, c);
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = a(i, j) - f * a(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<std::vector<T>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
    std::vector<T> v(cols, F::zero_like(sample));
    v[free] = F::one_like(sample);
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = T(F::zero_like(sample) - a(k, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace center_scope
