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

// Enumeration of algebraic decompositions M = A A^T.
//
// The search runs on a full-rank principal minor M' (M = R M' R^T). A
// partial decomposition is a list of columns in reverse lexicographic order
// together with the residual M' - B B^T. New columns are enumerated
// coordinate by coordinate in decreasing lexicographic order under the
// bounds
//   (1) w >= 0,
//   (2) w_{p+1} > 0 where the leading p x p block of the residual is zero,
//   (3) w <=_lex u for the previous column u,
//   (4) w_i <= residual_ij / w_j for j <= i with w_j > 0,
// and accepted when R w is a non-negative integer vector, every dot product
// v_i . R w is a d-number dividing D, and the new residual stays
// entrywise non-negative and positive semidefinite.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "center_scope/cyclotomic.hpp"
#include "center_scope/errors.hpp"
#include "center_scope/exact_linalg.hpp"
#include "center_scope/matrix.hpp"
#include "center_scope/problem.hpp"

namespace center_scope {

using Column = std::vector<std::int64_t>;

enum class PsdMode { numeric, exact };

struct SolverConfig {
  PsdMode psd_mode = PsdMode::numeric;
  // Accept a residual when every eigenvalue estimate is >= eig_tolerance.
  double eig_tolerance = -0.001;
  std::optional<std::size_t> max_solutions;
  std::optional<std::size_t> max_columns;
  std::optional<double> time_limit_seconds;
  std::size_t thread_count = 1;
  bool forbid_zero_dots = false;
  // Search directly on M when false.
  bool use_reduction = true;
  // Original row indices of the minor to reduce onto, overriding the
  // diagonal-sort heuristic.
  std::optional<std::vector<std::size_t>> minor_subset;

  void check() const {
    if (!(eig_tolerance <= 0)) throw InvalidArgument("eig_tolerance must be <= 0");
    if (thread_count < 1) throw InvalidArgument("thread_count must be >= 1");
  }
};

struct ReducedProblem {
  IntMatrix M_prime;
  RatMatrix R;  // n x r
  std::vector<std::vector<CycloNumber>> vs_reduced;
  CycloNumber D;
  std::size_t conductor = 1;
  std::size_t rank = 0;
  // Diagonal-sort permutation and chosen positions (empty when an explicit
  // subset was supplied or reduction is off).
  std::vector<std::size_t> permutation;
  IndexSubset subset;
  // Original indices of the minor's rows, in minor order.
  std::vector<std::size_t> rows;
  bool reduced = true;

  std::size_t size() const { return M_prime.rows(); }
};

inline ReducedProblem reduce_problem(const DecompositionProblem& p, const SolverConfig& cfg = {}) {
  p.check();
  ReducedProblem rp;
  rp.D = p.D;
  rp.conductor = p.conductor;
  const std::size_t n = p.size();
  if (!cfg.use_reduction) {
    rp.M_prime = p.M;
    rp.R = RatMatrix::identity(n);
    rp.rows.resize(n);
    std::iota(rp.rows.begin(), rp.rows.end(), 0);
    rp.rank = rank_rational(p.M);
    rp.vs_reduced = p.vs;
    rp.reduced = false;
    return rp;
  }
  rp.rank = rank_rational(p.M);
  if (cfg.minor_subset) {
    rp.rows = *cfg.minor_subset;
    if (rp.rows.size() != rp.rank) {
      throw InvalidArgument("minor subset has " + std::to_string(rp.rows.size()) + " indices but rank(M) = " +
                            std::to_string(rp.rank));
    }
    for (auto i : rp.rows)
      if (i >= n) throw InvalidArgument("minor subset index out of range");
    if (determinant(p.M.select(rp.rows, rp.rows)) == 0) throw InvalidArgument("chosen minor is singular");
  } else {
    auto sel = select_nonsingular_minor(p.M, rp.rank);
    rp.rows = sel.original_indices();
    rp.permutation = std::move(sel.permutation);
    rp.subset = std::move(sel.subset);
  }
  rp.M_prime = p.M.select(rp.rows, rp.rows);
  rp.R = compute_reduction(p.M, rp.rows);
  const std::size_t r = rp.rows.size();
  for (const auto& v : p.vs) {
    std::vector<CycloNumber> vr(r, CycloNumber(p.conductor));
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (rp.R(k, j) != 0 && !v[k].is_zero()) vr[j] += v[k] * rp.R(k, j);
      }
    rp.vs_reduced.push_back(std::move(vr));
  }
  return rp;
}

// R w when it is a non-negative integer vector.
inline std::optional<Column> lift_column(std::span<const std::int64_t> w, const RatMatrix& R) {
  if (w.size() != R.cols()) throw InvalidArgument("lift_column: column length does not match R");
  Column out(R.rows());
  for (std::size_t i = 0; i < R.rows(); ++i) {
    BigRational acc = 0;
    for (std::size_t j = 0; j < w.size(); ++j)
      if (w[j] != 0) acc += R(i, j) * BigRational(to_bigint(w[j]));
    if (!is_integer(acc) || acc < 0) return std::nullopt;
    out[i] = to_int64(acc.get_num());
  }
  return out;
}

// Both algebraic conditions for one dot product.
inline bool dot_passes(const CycloNumber& dot, const CycloNumber& D, bool forbid_zero_dots) {
  if (dot.is_zero()) return !forbid_zero_dots;
  return is_d_number(dot) && divides_as_algebraic_integer(dot, D);
}

// Greatest p with the leading p x p block of `res` identically zero.
inline std::size_t zero_prefix(const Matrix<std::int64_t>& res) {
  const std::size_t r = res.rows();
  std::size_t p = 0;
  while (p < r) {
    bool zero = true;
    for (std::size_t j = 0; j <= p && zero; ++j)
      if (res(p, j) != 0) zero = false;
    if (!zero) break;
    ++p;
  }
  return p;
}

struct PartialDecomposition {
  std::vector<Column> columns;
  Matrix<std::int64_t> residual;

  static PartialDecomposition start(const IntMatrix& m) { return {{}, to_int64(m)}; }

  std::size_t zero_prefix() const;

  bool complete() const {
    for (auto x : residual.data())
      if (x != 0) return false;
    return true;
  }
};

inline std::size_t PartialDecomposition::zero_prefix() const { return center_scope::zero_prefix(residual); }

namespace detail {

inline std::int64_t isqrt(std::int64_t x) {
  if (x <= 0) return 0;
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
  while (s * s > x) --s;
  while ((s + 1) * (s + 1) <= x) ++s;
  return s;
}

struct VectorHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Per-thread scratch space and memo tables.
struct Workspace {
  std::vector<std::unordered_map<std::vector<std::int64_t>, bool, VectorHash>> dot_cache;
  std::vector<std::int64_t> dot_scratch;
  Eigen::MatrixXd shifted;
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  std::vector<__int128> exact128;
  std::vector<BigInt> exact_big;
  std::uint64_t candidates_tested = 0;
  // Cooperative cancellation, polled during column enumeration.
  std::uint64_t ticks = 0;
  bool expired = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  const std::atomic<bool>* cancel = nullptr;

  bool poll() {
    if (expired) return true;
    if ((++ticks & 0xFFFF) != 0) return false;
    if ((cancel && cancel->load()) || (deadline && std::chrono::steady_clock::now() > *deadline)) expired = true;
    return expired;
  }
};

// Immutable per-search data shared by all threads.
class ColumnSearch {
 public:
  ColumnSearch(const ReducedProblem& rp, const SolverConfig& cfg) : rp_(rp), cfg_(cfg) {
    r_ = rp.size();
    m_prime_ = to_int64(rp.M_prime);
    for (auto x : m_prime_.data()) {
      if (x < 0 || x > (std::int64_t{1} << 40)) throw InvalidArgument("reduced matrix entries out of search range");
    }
    std::int64_t column_sum_bound = 0;
    for (std::size_t i = 0; i < r_; ++i) column_sum_bound += isqrt(m_prime_(i, i));
    column_sum_bound = std::max<std::int64_t>(column_sum_bound, 1);
    const BigInt limit = BigInt(1) << 62;

    // Lift rows as integer numerators over a per-row common denominator.
    const std::size_t n = rp.R.rows();
    lift_num_.assign(n * r_, 0);
    lift_den_.assign(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      BigInt l = 1;
      for (std::size_t j = 0; j < r_; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), rp.R(i, j).get_den_mpz_t());
      lift_den_[i] = to_int64(l);
      for (std::size_t j = 0; j < r_; ++j) {
        BigInt num = rp.R(i, j).get_num() * (l / rp.R(i, j).get_den());
        if (abs(num) * column_sum_bound >= limit) throw InvalidArgument("reduction matrix entries too large");
        lift_num_[i * r_ + j] = to_int64(num);
      }
    }
    // Skip rows that are copies of minor rows (unit vectors).
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t nonzero = 0;
      bool unit = lift_den_[i] == 1;
      for (std::size_t j = 0; j < r_; ++j) {
        auto v = lift_num_[i * r_ + j];
        if (v != 0) ++nonzero;
        if (v != 0 && v != 1) unit = false;
      }
      if (!(unit && nonzero == 1)) lift_rows_.push_back(i);
    }

    // Dot products as integer numerator vectors over a common denominator.
    degree_ = CycloNumber(rp.conductor).degree();
    for (const auto& vr : rp.vs_reduced) {
      BigInt l = 1;
      for (const auto& x : vr)
        for (const auto& c : x.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
      std::vector<std::int64_t> nums(r_ * degree_, 0);
      for (std::size_t j = 0; j < r_; ++j)
        for (std::size_t c = 0; c < degree_; ++c) {
          const auto& q = vr[j].coeffs()[c];
          BigInt num = q.get_num() * (l / q.get_den());
          if (abs(num) * column_sum_bound >= limit) throw InvalidArgument("dimension vector entries too large");
          nums[j * degree_ + c] = to_int64(num);
        }
      dot_den_.push_back(BigRational(BigInt(1), l));
      dot_num_.push_back(std::move(nums));
    }

    // Fraction-free PSD intermediates are bounded by the Hadamard bound of
    // the residual, which is entrywise between 0 and M'.
    double log2_bound = 0;
    for (std::size_t i = 0; i < r_; ++i) {
      double row = 0;
      for (std::size_t j = 0; j < r_; ++j) row += static_cast<double>(m_prime_(i, j)) * static_cast<double>(m_prime_(i, j));
      log2_bound += 0.5 * std::log2(std::max(row, 1.0));
    }
    exact_fits_128_ = 2 * log2_bound + 2 < 125;
  }

  std::size_t rank() const { return r_; }
  const ReducedProblem& reduced() const { return rp_; }
  const SolverConfig& config() const { return cfg_; }

  Workspace make_workspace() const {
    Workspace ws;
    ws.dot_cache.resize(dot_num_.size());
    ws.dot_scratch.assign(degree_, 0);
    ws.shifted.resize(static_cast<Eigen::Index>(r_), static_cast<Eigen::Index>(r_));
    ws.exact128.resize(r_ * r_);
    ws.exact_big.resize(r_ * r_);
    return ws;
  }

  bool lift_ok(std::span<const std::int64_t> w) const {
    for (auto i : lift_rows_) {
      std::int64_t acc = 0;
      const std::int64_t* row = lift_num_.data() + i * r_;
      for (std::size_t j = 0; j < r_; ++j) acc += row[j] * w[j];
      if (acc < 0 || acc % lift_den_[i] != 0) return false;
    }
    return true;
  }

  Column lift(std::span<const std::int64_t> w) const {
    Column out(lift_den_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::int64_t acc = 0;
      for (std::size_t j = 0; j < r_; ++j) acc += lift_num_[i * r_ + j] * w[j];
      out[i] = acc / lift_den_[i];
    }
    return out;
  }

  CycloNumber dot(std::size_t which, std::span<const std::int64_t> w) const {
    std::vector<BigRational> coeffs(degree_, BigRational(0));
    for (std::size_t c = 0; c < degree_; ++c) {
      std::int64_t acc = 0;
      for (std::size_t j = 0; j < r_; ++j) acc += dot_num_[which][j * degree_ + c] * w[j];
      coeffs[c] = BigRational(to_bigint(acc)) * dot_den_[which];
    }
    return CycloNumber::from_coeffs(rp_.conductor, std::move(coeffs));
  }

  bool algebraic_ok(std::span<const std::int64_t> w, Workspace& ws) const {
    for (std::size_t which = 0; which < dot_num_.size(); ++which) {
      auto& key = ws.dot_scratch;
      const auto& nums = dot_num_[which];
      std::fill(key.begin(), key.end(), 0);
      for (std::size_t j = 0; j < r_; ++j) {
        if (w[j] == 0) continue;
        const std::int64_t* row = nums.data() + j * degree_;
        for (std::size_t c = 0; c < degree_; ++c) key[c] += row[c] * w[j];
      }
      auto& cache = ws.dot_cache[which];
      auto it = cache.find(key);
      bool pass;
      if (it != cache.end()) {
        pass = it->second;
      } else {
        pass = dot_passes(dot(which, w), rp_.D, cfg_.forbid_zero_dots);
        cache.emplace(key, pass);
      }
      if (!pass) return false;
    }
    return true;
  }

  bool psd_ok(const Matrix<std::int64_t>& res, Workspace& ws) const {
    const std::size_t r = r_;
    if (cfg_.psd_mode == PsdMode::numeric) {
      auto& s = ws.shifted;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
          s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(res(i, j));
      for (std::size_t i = 0; i < r; ++i) s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= cfg_.eig_tolerance;
      // Cholesky of M - tol*I succeeding means every eigenvalue exceeds tol;
      // otherwise decide on the eigenvalue estimate itself.
      ws.llt.compute(s);
      if (ws.llt.info() == Eigen::Success) return true;
      for (std::size_t i = 0; i < r; ++i) s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += cfg_.eig_tolerance;
      ws.eig.compute(s, Eigen::EigenvaluesOnly);
      return ws.eig.eigenvalues()(0) >= cfg_.eig_tolerance;
    }
    if (exact_fits_128_) {
      for (std::size_t i = 0; i < r * r; ++i) ws.exact128[i] = res.data()[i];
      return is_psd_fraction_free<__int128>(std::span<__int128>(ws.exact128), r);
    }
    for (std::size_t i = 0; i < r * r; ++i) ws.exact_big[i] = to_bigint(res.data()[i]);
    return is_psd_fraction_free<BigInt>(std::span<BigInt>(ws.exact_big), r);
  }

  // Calls f(w, new_residual) for every new column of the partial
  // decomposition with residual `res` and last column `last`, in decreasing
  // lexicographic order. f returns false to stop the enumeration.
  template <class F>
  void for_each_candidate(const Matrix<std::int64_t>& res, const Column* last, Workspace& ws, F&& f) const {
    const std::size_t p = zero_prefix(res);
    if (p == r_) return;
    Matrix<std::int64_t> next = res;
    Column w(r_, 0);
    bool stop = false;
    enumerate(0, p, true, res, last, w, ws, next, f, stop);
  }

 private:
  template <class F>
  void enumerate(std::size_t i, std::size_t p, bool tight, const Matrix<std::int64_t>& res, const Column* last,
                 Column& w, Workspace& ws, Matrix<std::int64_t>& next, F& f, bool& stop) const {
    if (i == r_) {
      ++ws.candidates_tested;
      // Entrywise non-negativity is implied by the bounds; recheck anyway
      // since it is cheap.
      for (std::size_t a = 0; a < r_; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
          const std::int64_t v = res(a, b) - w[a] * w[b];
          if (v < 0) return;
          next(a, b) = v;
          next(b, a) = v;
        }
      if (!lift_ok(w)) return;
      if (!algebraic_ok(w, ws)) return;
      if (!psd_ok(next, ws)) return;
      if (!f(static_cast<const Column&>(w), static_cast<const Matrix<std::int64_t>&>(next))) stop = true;
      return;
    }
    std::int64_t ub = isqrt(res(i, i));
    for (std::size_t j = 0; j < i; ++j) {
      if (w[j] > 0) ub = std::min(ub, res(i, j) / w[j]);
    }
    if (tight && last != nullptr) ub = std::min(ub, (*last)[i]);
    const std::int64_t lb = i == p ? 1 : 0;
    if (ws.poll()) {
      stop = true;
      return;
    }
    for (std::int64_t v = ub; v >= lb && !stop; --v) {
      w[i] = v;
      enumerate(i + 1, p, tight && last != nullptr && v == (*last)[i], res, last, w, ws, next, f, stop);
    }
    w[i] = 0;
  }

  const ReducedProblem& rp_;
  SolverConfig cfg_;
  std::size_t r_ = 0;
  Matrix<std::int64_t> m_prime_;
  std::vector<std::int64_t> lift_num_;
  std::vector<std::int64_t> lift_den_;
  std::vector<std::size_t> lift_rows_;
  std::size_t degree_ = 1;
  std::vector<std::vector<std::int64_t>> dot_num_;
  std::vector<BigRational> dot_den_;
  bool exact_fits_128_ = true;
};

}  // namespace detail

// All new columns for B, in decreasing lexicographic order.
inline std::vector<Column> new_column_candidates(const PartialDecomposition& B, const ReducedProblem& rp,
                                                 const SolverConfig& cfg = {}) {
  detail::ColumnSearch search(rp, cfg);
  auto ws = search.make_workspace();
  std::vector<Column> out;
  const Column* last = B.columns.empty() ? nullptr : &B.columns.back();
  search.for_each_candidate(B.residual, last, ws, [&](const Column& w, const Matrix<std::int64_t>&) {
    out.push_back(w);
    return true;
  });
  return out;
}

struct InductionResult {
  IntMatrix A;  // n x m, M = A A^T
  // Rows of A on the reduction minor (r x m); columns are reverse-lex here.
  IntMatrix A_reduced;
  std::vector<IntMatrix> blocks;
  std::size_t column_count = 0;
  // dots[i][c] = v_i . (column c of A)
  std::vector<std::vector<CycloNumber>> dots;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t candidates_tested = 0;
  double wall_seconds = 0;
};

struct SearchResult {
  std::vector<InductionResult> solutions;
  bool truncated = false;
  std::string truncation_reason;
  SearchStats stats;
  ReducedProblem reduction;
};

inline std::vector<IntMatrix> split_blocks(const IntMatrix& A, std::span<const std::size_t> layout) {
  if (std::accumulate(layout.begin(), layout.end(), std::size_t{0}) != A.rows()) {
    throw InvalidArgument("layout does not match the row count");
  }
  std::vector<IntMatrix> out;
  std::size_t row = 0;
  for (auto count : layout) {
    std::vector<std::size_t> rows(count);
    std::iota(rows.begin(), rows.end(), row);
    std::vector<std::size_t> cols(A.cols());
    std::iota(cols.begin(), cols.end(), 0);
    out.push_back(count == 0 ? IntMatrix(0, A.cols()) : A.select(rows, cols));
    row += count;
  }
  return out;
}

struct VerificationReport {
  bool ok = true;
  std::vector<std::string> issues;
  void fail(std::string msg) {
    ok = false;
    issues.push_back(std::move(msg));
  }
};

// Checks M = A A^T, non-negativity, and the algebraic conditions on every
// column. Column order does not matter. Indices in messages are 1-based.
inline VerificationReport verify_report(const IntMatrix& A, const DecompositionProblem& p,
                                        bool forbid_zero_dots = false) {
  if (A.rows() != p.size()) {
    throw InvalidArgument("decomposition has " + std::to_string(A.rows()) + " rows, problem has " +
                          std::to_string(p.size()));
  }
  VerificationReport report;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (A(i, j) < 0) {
        report.fail("negative entry at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        return report;
      }
  const IntMatrix aat = gram(A);
  for (std::size_t i = 0; i < p.size() && report.ok; ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (aat(i, j) != p.M(i, j)) {
        report.fail("AA^T mismatch at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " +
                    to_string(aat(i, j)) + " != " + to_string(p.M(i, j)));
        break;
      }
  for (std::size_t c = 0; c < A.cols(); ++c) {
    for (std::size_t which = 0; which < p.vs.size(); ++which) {
      CycloNumber dot(p.conductor);
      for (std::size_t i = 0; i < A.rows(); ++i)
        if (A(i, c) != 0) dot += p.vs[which][i] * BigRational(A(i, c));
      const std::string where = "column " + std::to_string(c + 1) + ", vector " + std::to_string(which + 1);
      if (dot.is_zero()) {
        if (forbid_zero_dots) report.fail(where + ": zero dot product");
        continue;
      }
      if (!is_d_number(dot)) {
        report.fail(where + ": " + dot.to_string() + " is not a d-number");
      } else if (!divides_as_algebraic_integer(dot, p.D)) {
        report.fail(where + ": " + dot.to_string() + " does not divide D");
      }
    }
  }
  return report;
}

inline bool verify_decomposition(const IntMatrix& A, const DecompositionProblem& p, bool forbid_zero_dots = false) {
  return verify_report(A, p, forbid_zero_dots).ok;
}

namespace detail {

struct Task {
  PartialDecomposition state;
  std::vector<InductionResult> solutions;
  std::uint64_t nodes = 0;
  std::uint64_t candidates = 0;
  bool column_cap_hit = false;
};

inline bool lex_less(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) return a.cols() < b.cols();
  return std::lexicographical_compare(a.data().begin(), a.data().end(), b.data().begin(), b.data().end());
}

}  // namespace detail

inline SearchResult search_all(const DecompositionProblem& p, const SolverConfig& cfg = {}) {
  cfg.check();
  const auto start = std::chrono::steady_clock::now();
  SearchResult result;
  result.reduction = reduce_problem(p, cfg);
  if (cfg.max_solutions && *cfg.max_solutions == 0) {
    result.truncated = true;
    result.truncation_reason = "max_solutions";
    return result;
  }
  const ReducedProblem& rp = result.reduction;
  const detail::ColumnSearch search(rp, cfg);
  const auto layout = p.effective_layout();

  std::atomic<bool> stop{false};
  std::atomic<std::size_t> found{0};
  std::mutex reason_mutex;
  std::string reason;
  auto halt = [&](const char* why) {
    std::lock_guard<std::mutex> lock(reason_mutex);
    if (reason.empty()) reason = why;
    stop = true;
  };
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (cfg.time_limit_seconds) {
    deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                           std::chrono::duration<double>(*cfg.time_limit_seconds));
  }
  auto timed_out = [&]() { return deadline && std::chrono::steady_clock::now() > *deadline; };
  auto make_workspace = [&]() {
    auto ws = search.make_workspace();
    ws.deadline = deadline;
    ws.cancel = &stop;
    return ws;
  };

  auto emit = [&](detail::Task& task, const std::vector<Column>& cols) {
    InductionResult res;
    const std::size_t m = cols.size();
    res.column_count = m;
    res.A = IntMatrix(p.size(), m, BigInt(0));
    res.A_reduced = IntMatrix(rp.size(), m, BigInt(0));
    for (std::size_t c = 0; c < m; ++c) {
      const Column full = search.lift(cols[c]);
      for (std::size_t i = 0; i < full.size(); ++i) res.A(i, c) = to_bigint(full[i]);
      for (std::size_t i = 0; i < rp.size(); ++i) res.A_reduced(i, c) = to_bigint(cols[c][i]);
    }
    if (!verify_decomposition(res.A, p, cfg.forbid_zero_dots)) {
      throw InvariantViolation("search produced a decomposition that fails verification");
    }
    res.blocks = split_blocks(res.A, layout);
    for (const auto& v : p.vs) {
      std::vector<CycloNumber> dots;
      for (std::size_t c = 0; c < m; ++c) {
        CycloNumber d(p.conductor);
        for (std::size_t i = 0; i < p.size(); ++i)
          if (res.A(i, c) != 0) d += v[i] * BigRational(res.A(i, c));
        dots.push_back(std::move(d));
      }
      res.dots.push_back(std::move(dots));
    }
    task.solutions.push_back(std::move(res));
    const std::size_t total = ++found;
    if (cfg.max_solutions && total >= *cfg.max_solutions) halt("max_solutions");
  };

  // Depth-first search below one task's starting state.
  auto run = [&](detail::Task& task, detail::Workspace& ws) {
    std::vector<Column> cols = task.state.columns;
    std::function<void(const Matrix<std::int64_t>&)> dfs = [&](const Matrix<std::int64_t>& res) {
      ++task.nodes;
      if ((task.nodes & 0xFFF) == 0 && timed_out()) halt("time_limit");
      if (stop) return;
      bool zero = true;
      for (auto x : res.data())
        if (x != 0) {
          zero = false;
          break;
        }
      if (zero) {
        emit(task, cols);
        return;
      }
      if (cfg.max_columns && cols.size() >= *cfg.max_columns) {
        task.column_cap_hit = true;
        return;
      }
      const Column last = cols.empty() ? Column{} : cols.back();
      search.for_each_candidate(res, cols.empty() ? nullptr : &last, ws,
                                [&](const Column& w, const Matrix<std::int64_t>& next) {
                                  cols.push_back(w);
                                  dfs(next);
                                  cols.pop_back();
                                  return !stop.load();
                                });
      if (ws.expired && !stop) halt("time_limit");
    };
    dfs(task.state.residual);
  };

  // Split the tree: expand the root (and one more level when useful) into
  // independent tasks, in depth-first order.
  std::vector<detail::Task> tasks;
  std::uint64_t split_nodes = 0;
  {
    auto ws = make_workspace();
    std::vector<PartialDecomposition> frontier{PartialDecomposition::start(rp.M_prime)};
    const std::size_t depth = cfg.thread_count > 1 ? 2 : 0;
    for (std::size_t level = 0; level < depth; ++level) {
      std::vector<PartialDecomposition> next_frontier;
      for (auto& state : frontier) {
        if (state.complete() || (cfg.max_columns && state.columns.size() >= *cfg.max_columns)) {
          next_frontier.push_back(std::move(state));
          continue;
        }
        ++split_nodes;
        const Column* last = state.columns.empty() ? nullptr : &state.columns.back();
        search.for_each_candidate(state.residual, last, ws, [&](const Column& w, const Matrix<std::int64_t>& res) {
          PartialDecomposition child{state.columns, res};
          child.columns.push_back(w);
          next_frontier.push_back(std::move(child));
          return true;
        });
      }
      frontier = std::move(next_frontier);
    }
    result.stats.candidates_tested += ws.candidates_tested;
    if (ws.expired && !stop) halt("time_limit");
    for (auto& s : frontier) tasks.push_back(detail::Task{std::move(s), {}, 0, 0, false});
  }

  std::atomic<std::size_t> next_task{0};
  auto worker = [&]() {
    auto ws = make_workspace();
    for (;;) {
      const std::size_t t = next_task++;
      if (t >= tasks.size() || stop) break;
      run(tasks[t], ws);
    }
    std::lock_guard<std::mutex> lock(reason_mutex);
    result.stats.candidates_tested += ws.candidates_tested;
  };
  const std::size_t threads = std::min(cfg.thread_count, std::max<std::size_t>(tasks.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  result.stats.nodes = split_nodes;
  bool column_cap_hit = false;
  for (auto& task : tasks) {
    result.stats.nodes += task.nodes;
    column_cap_hit = column_cap_hit || task.column_cap_hit;
    for (auto& s : task.solutions) result.solutions.push_back(std::move(s));
  }
  std::stable_sort(result.solutions.begin(), result.solutions.end(),
                   [](const InductionResult& a, const InductionResult& b) { return detail::lex_less(a.A, b.A); });
  if (cfg.max_solutions && result.solutions.size() > *cfg.max_solutions) result.solutions.resize(*cfg.max_solutions);
  if (!reason.empty()) {
    result.truncated = true;
    result.truncation_reason = reason;
  } else if (column_cap_hit) {
    result.truncated = true;
    result.truncation_reason = "max_columns";
  }
  const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
  result.stats.wall_seconds = el.count();
  return result;
}

// Exhaustive oracle: every multiset of nonzero non-negative integer columns
// w with sum w w^T = M. Each multiset is listed in decreasing lexicographic
// order; the list itself is sorted.
inline constexpr std::size_t kOracleMaxSize = 6;
inline constexpr std::int64_t kOracleMaxTrace = 24;

inline std::vector<std::vector<Column>> brute_force_decompositions(const IntMatrix& m) {
  if (!m.is_symmetric()) throw InvalidArgument("oracle needs a symmetric matrix");
  const std::size_t n = m.rows();
  if (n > kOracleMaxSize) throw InvalidArgument("oracle limited to n <= 6");
  auto res = to_int64(m);
  std::int64_t trace = 0;
  for (std::size_t i = 0; i < n; ++i) trace += res(i, i);
  if (trace > kOracleMaxTrace) throw InvalidArgument("oracle limited to trace(M) <= 24");
  for (auto x : res.data())
    if (x < 0) return {};

  std::vector<std::vector<Column>> out;
  std::vector<Column> chosen;
  std::function<void()> recurse = [&]() {
    bool zero = true;
    for (auto x : res.data())
      if (x != 0) zero = false;
    if (zero) {
      out.push_back(chosen);
      return;
    }
    // All columns with w_i^2 <= res_ii, at most the previous column in lex
    // order, and keeping the residual entrywise non-negative.
    Column w(n, 0);
    std::function<void(std::size_t)> gen = [&](std::size_t i) {
      if (i == n) {
        bool nonzero = false;
        for (auto x : w)
          if (x != 0) nonzero = true;
        if (!nonzero) return;
        if (!chosen.empty() && chosen.back() < w) return;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            if (res(a, b) - w[a] * w[b] < 0) return;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) res(a, b) -= w[a] * w[b];
        chosen.push_back(w);
        recurse();
        chosen.pop_back();
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) res(a, b) += w[a] * w[b];
        return;
      }
      for (std::int64_t v = 0; v * v <= res(i, i); ++v) {
        w[i] = v;
        gen(i + 1);
      }
      w[i] = 0;
    };
    gen(0);
  };
  recurse();
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace center_scope
