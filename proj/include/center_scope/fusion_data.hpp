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

// Grothendieck data of a fusion 2-category: one fusion ring per object and
// one bimodule block per pair of objects. Builds the Gram matrix of
// induced objects, the padded dimension vectors, and the global dimension.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "center_scope/cyclotomic.hpp"
#include "center_scope/errors.hpp"
#include "center_scope/exact_linalg.hpp"
#include "center_scope/matrix.hpp"
#include "center_scope/problem.hpp"

namespace center_scope {

// Three-index table of non-negative multiplicities t[a][b][c].
class Multiplicities {
 public:
  Multiplicities() = default;
  Multiplicities(std::size_t a, std::size_t b, std::size_t c)
      : a_(a), b_(b), c_(c), data_(a * b * c, 0) {}

  std::size_t extent(int axis) const { return axis == 0 ? a_ : axis == 1 ? b_ : c_; }
  std::int64_t& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * b_ + j) * c_ + k]; }
  std::int64_t operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * b_ + j) * c_ + k];
  }
  friend bool operator==(const Multiplicities&, const Multiplicities&) = default;

 private:
  std::size_t a_ = 0, b_ = 0, c_ = 0;
  std::vector<std::int64_t> data_;
};

struct FusionRing {
  std::string name;
  // N(i, j, l) = multiplicity of X_l in X_i X_j.
  Multiplicities N;
  std::size_t unit = 0;
  // Empty means "derive from N(i, j, unit)".
  std::vector<std::size_t> dual;
  std::vector<CycloNumber> dims;

  std::size_t rank() const { return N.extent(0); }

  // dual(i) is the unique j with N(i, j, unit) = 1; npos if there is none.
  std::vector<std::size_t> derived_dual() const {
    std::vector<std::size_t> out(rank(), static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j)
        if (N(i, j, unit) == 1 && out[i] == static_cast<std::size_t>(-1)) out[i] = j;
    return out;
  }
};

// Hom(from, to): a bimodule with `from`'s ring acting on the left and
// `to`'s ring acting on the right.
struct BimoduleBlock {
  std::size_t from = 0;
  std::size_t to = 0;
  // left(x, m, m') = multiplicity of m' in x . m
  Multiplicities left;
  // right(y, m, m') = multiplicity of m' in m . y
  Multiplicities right;

  std::size_t simple_count() const { return left.extent(1); }
};

struct TwoCategoryData {
  std::size_t conductor = 1;
  std::vector<FusionRing> rings;
  std::vector<BimoduleBlock> blocks;

  std::size_t object_count() const { return rings.size(); }
  std::size_t total_simples() const {
    std::size_t n = 0;
    for (const auto& r : rings) n += r.rank();
    return n;
  }
  std::vector<std::size_t> offsets() const {
    std::vector<std::size_t> out;
    std::size_t acc = 0;
    for (const auto& r : rings) {
      out.push_back(acc);
      acc += r.rank();
    }
    return out;
  }
};

struct Violation {
  std::string kind;
  std::string where;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  void add(std::string kind, std::string where, std::string message) {
    violations.push_back({std::move(kind), std::move(where), std::move(message)});
  }
  std::string to_string() const {
    if (ok()) return "pass\n";
    std::ostringstream os;
    for (const auto& v : violations) os << v.kind << " [" << v.where << "]: " << v.message << "\n";
    return os.str();
  }
};

namespace detail {

inline std::string idx(std::initializer_list<std::size_t> xs) {
  std::string s = "(";
  bool first = true;
  for (auto x : xs) {
    if (!first) s += ",";
    s += std::to_string(x);
    first = false;
  }
  return s + ")";
}

inline void validate_ring(const FusionRing& ring, std::size_t conductor, ValidationReport& report) {
  const std::size_t k = ring.rank();
  const std::string& nm = ring.name;
  if (ring.N.extent(1) != k || ring.N.extent(2) != k) {
    report.add("shape", nm, "fusion table is not k x k x k");
    return;
  }
  if (k == 0) {
    report.add("shape", nm, "ring has no simples");
    return;
  }
  if (ring.unit >= k) {
    report.add("unit", nm, "unit index out of range");
    return;
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l) {
        if (ring.N(i, j, l) < 0) report.add("nonnegativity", nm + idx({i, j, l}), "negative multiplicity");
      }
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = 0; l < k; ++l) {
      const std::int64_t want = j == l ? 1 : 0;
      if (ring.N(ring.unit, j, l) != want) report.add("unit", nm + idx({ring.unit, j, l}), "unit does not act as identity on the left");
      if (ring.N(j, ring.unit, l) != want) report.add("unit", nm + idx({j, ring.unit, l}), "unit does not act as identity on the right");
    }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l)
        for (std::size_t p = 0; p < k; ++p) {
          std::int64_t lhs = 0, rhs = 0;
          for (std::size_t m = 0; m < k; ++m) {
            lhs += ring.N(i, j, m) * ring.N(m, l, p);
            rhs += ring.N(j, l, m) * ring.N(i, m, p);
          }
          if (lhs != rhs) {
            report.add("associativity", nm + idx({i, j, l, p}),
                       "(X_i X_j) X_l and X_i (X_j X_l) differ: " + std::to_string(lhs) + " vs " + std::to_string(rhs));
          }
        }
  const auto dual = ring.dual.empty() ? ring.derived_dual() : ring.dual;
  if (dual.size() != k) {
    report.add("duality", nm, "dual map has wrong length");
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      if (dual[i] >= k) {
        report.add("duality", nm + idx({i}), "simple has no dual");
        continue;
      }
      if (dual[dual[i]] != i) report.add("duality", nm + idx({i}), "dual map is not an involution");
      for (std::size_t j = 0; j < k; ++j) {
        const std::int64_t want = j == dual[i] ? 1 : 0;
        if (ring.N(i, j, ring.unit) != want) {
          report.add("frobenius", nm + idx({i, j}), "N(i, j, unit) must be 1 exactly when j is dual to i");
        }
      }
    }
  }
  if (ring.dims.size() != k) {
    report.add("dims", nm, "expected " + std::to_string(k) + " dimensions");
    return;
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (ring.dims[i].conductor() != conductor) {
      report.add("conductor", nm + idx({i}), "dimension uses a different conductor");
      return;
    }
    const auto z = ring.dims[i].to_complex();
    if (!(z.real() > 0) || std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z.real()))) {
      report.add("dims", nm + idx({i}), "dimension does not embed as a positive real");
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      CycloNumber rhs(conductor);
      for (std::size_t l = 0; l < k; ++l) {
        if (ring.N(i, j, l) != 0) rhs += ring.dims[l] * BigRational(to_bigint(ring.N(i, j, l)));
      }
      if (!(ring.dims[i] * ring.dims[j] == rhs)) {
        report.add("multiplicativity", nm + idx({i, j}), "dim(X_i) dim(X_j) != sum_l N(i,j,l) dim(X_l)");
      }
    }
}

inline void validate_block(const BimoduleBlock& b, const TwoCategoryData& data, ValidationReport& report) {
  const std::string nm = "bimodule " + data.rings[b.from].name + "->" + data.rings[b.to].name;
  const auto& ra = data.rings[b.from];
  const auto& rb = data.rings[b.to];
  const std::size_t s = b.left.extent(1);
  if (b.left.extent(0) != ra.rank() || b.left.extent(2) != s) {
    report.add("shape", nm, "left action must be (simples of " + ra.name + ") x s x s");
    return;
  }
  if (b.right.extent(0) != rb.rank() || b.right.extent(1) != s || b.right.extent(2) != s) {
    report.add("shape", nm, "right action must be (simples of " + rb.name + ") x s x s");
    return;
  }
  for (std::size_t m = 0; m < s; ++m)
    for (std::size_t m2 = 0; m2 < s; ++m2) {
      const std::int64_t want = m == m2 ? 1 : 0;
      if (b.left(ra.unit, m, m2) != want) report.add("unit", nm + " left" + idx({m, m2}), "unit does not act as identity");
      if (b.right(rb.unit, m, m2) != want) report.add("unit", nm + " right" + idx({m, m2}), "unit does not act as identity");
    }
  // x.(x'.m) = (x x').m
  for (std::size_t x = 0; x < ra.rank(); ++x)
    for (std::size_t x2 = 0; x2 < ra.rank(); ++x2)
      for (std::size_t m = 0; m < s; ++m)
        for (std::size_t m2 = 0; m2 < s; ++m2) {
          std::int64_t lhs = 0, rhs = 0;
          for (std::size_t m1 = 0; m1 < s; ++m1) lhs += b.left(x2, m, m1) * b.left(x, m1, m2);
          for (std::size_t l = 0; l < ra.rank(); ++l) rhs += ra.N(x, x2, l) * b.left(l, m, m2);
          if (lhs != rhs) report.add("module-associativity", nm + " left" + idx({x, x2, m, m2}), "left action is not associative");
        }
  // (m.y).y' = m.(y y')
  for (std::size_t y = 0; y < rb.rank(); ++y)
    for (std::size_t y2 = 0; y2 < rb.rank(); ++y2)
      for (std::size_t m = 0; m < s; ++m)
        for (std::size_t m2 = 0; m2 < s; ++m2) {
          std::int64_t lhs = 0, rhs = 0;
          for (std::size_t m1 = 0; m1 < s; ++m1) lhs += b.right(y, m, m1) * b.right(y2, m1, m2);
          for (std::size_t l = 0; l < rb.rank(); ++l) rhs += rb.N(y, y2, l) * b.right(l, m, m2);
          if (lhs != rhs) report.add("module-associativity", nm + " right" + idx({y, y2, m, m2}), "right action is not associative");
        }
  // (x.m).y = x.(m.y)
  for (std::size_t x = 0; x < ra.rank(); ++x)
    for (std::size_t y = 0; y < rb.rank(); ++y)
      for (std::size_t m = 0; m < s; ++m)
        for (std::size_t m2 = 0; m2 < s; ++m2) {
          std::int64_t lhs = 0, rhs = 0;
          for (std::size_t m1 = 0; m1 < s; ++m1) {
            lhs += b.left(x, m, m1) * b.right(y, m1, m2);
            rhs += b.right(y, m, m1) * b.left(x, m1, m2);
          }
          if (lhs != rhs) report.add("bimodule-commutation", nm + idx({x, y, m, m2}), "left and right actions do not commute");
        }
  for (std::size_t m = 0; m < s; ++m)
    for (std::size_t m2 = 0; m2 < s; ++m2) {
      for (std::size_t x = 0; x < ra.rank(); ++x)
        if (b.left(x, m, m2) < 0) report.add("nonnegativity", nm + " left" + idx({x, m, m2}), "negative multiplicity");
      for (std::size_t y = 0; y < rb.rank(); ++y)
        if (b.right(y, m, m2) < 0) report.add("nonnegativity", nm + " right" + idx({y, m, m2}), "negative multiplicity");
    }
}

// Index of the block joining a and b (either orientation), if any.
inline std::optional<std::size_t> find_block(const TwoCategoryData& data, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < data.blocks.size(); ++i) {
    const auto& blk = data.blocks[i];
    if ((blk.from == a && blk.to == b) || (blk.from == b && blk.to == a)) return i;
  }
  return std::nullopt;
}

}  // namespace detail

inline CycloNumber global_dimension(const FusionRing& ring) {
  if (ring.dims.empty()) throw InvalidArgument("ring '" + ring.name + "' has no dimensions");
  CycloNumber sum(ring.dims.front().conductor());
  for (const auto& d : ring.dims) sum += d * d;
  return sum;
}

inline ValidationReport validate(const TwoCategoryData& data) {
  ValidationReport report;
  if (data.rings.empty()) {
    report.add("shape", "data", "no objects");
    return report;
  }
  for (const auto& ring : data.rings) detail::validate_ring(ring, data.conductor, report);
  for (const auto& blk : data.blocks) {
    if (blk.from >= data.rings.size() || blk.to >= data.rings.size() || blk.from == blk.to) {
      report.add("shape", "bimodule", "bimodule must join two distinct existing objects");
      continue;
    }
    detail::validate_block(blk, data, report);
  }
  for (std::size_t a = 0; a < data.rings.size(); ++a)
    for (std::size_t b = a + 1; b < data.rings.size(); ++b) {
      std::size_t count = 0;
      for (const auto& blk : data.blocks)
        if ((blk.from == a && blk.to == b) || (blk.from == b && blk.to == a)) ++count;
      if (count != 1) {
        report.add("shape", data.rings[a].name + "," + data.rings[b].name,
                   "expected exactly one bimodule block, found " + std::to_string(count));
      }
    }
  if (report.ok() && data.rings.size() > 1) {
    const auto d0 = global_dimension(data.rings[0]);
    for (std::size_t a = 1; a < data.rings.size(); ++a) {
      if (!(global_dimension(data.rings[a]) == d0)) {
        report.add("global-dimension", data.rings[a].name, "global dimension differs from " + data.rings[0].name);
      }
    }
  }
  return report;
}

// Numeric check that dims is the Frobenius-Perron eigenvector of every
// left multiplication matrix (positive, unit = 1, eigenvalue dims_i).
inline bool fp_dimension_check(const FusionRing& ring, double rel_tol = 1e-8) {
  const std::size_t k = ring.rank();
  if (ring.dims.size() != k) return false;
  std::vector<double> d(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto z = ring.dims[i].to_complex();
    if (!(z.real() > 0) || std::abs(z.imag()) > rel_tol * std::max(1.0, z.real())) return false;
    d[i] = z.real();
  }
  if (std::abs(d[ring.unit] - 1.0) > rel_tol) return false;
  double norm = 0;
  for (double x : d) norm = std::max(norm, x);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double lhs = 0;
      for (std::size_t l = 0; l < k; ++l) lhs += static_cast<double>(ring.N(i, j, l)) * d[l];
      if (std::abs(lhs - d[i] * d[j]) > rel_tol * norm * norm) return false;
    }
  return true;
}

inline FusionRing opposite_ring(const FusionRing& ring) {
  FusionRing op = ring;
  op.name = ring.name + "^op";
  const std::size_t k = ring.rank();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l) op.N(i, j, l) = ring.N(j, i, l);
  return op;
}

// Relabels simples of every ring so that dimensions increase (numerically),
// ties kept in input order. Bimodule data is relabelled to match.
inline TwoCategoryData sort_simples_by_dimension(const TwoCategoryData& data) {
  TwoCategoryData out = data;
  std::vector<std::vector<std::size_t>> perms;  // perms[a][new] = old
  for (auto& ring : out.rings) {
    const std::size_t k = ring.rank();
    std::vector<std::size_t> p(k);
    std::iota(p.begin(), p.end(), 0);
    std::stable_sort(p.begin(), p.end(), [&](std::size_t x, std::size_t y) {
      return ring.dims[x].to_complex().real() < ring.dims[y].to_complex().real();
    });
    std::vector<std::size_t> inv_p(k);
    for (std::size_t i = 0; i < k; ++i) inv_p[p[i]] = i;
    FusionRing sorted = ring;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < k; ++l) sorted.N(i, j, l) = ring.N(p[i], p[j], p[l]);
    sorted.unit = inv_p[ring.unit];
    for (std::size_t i = 0; i < k; ++i) sorted.dims[i] = ring.dims[p[i]];
    if (!ring.dual.empty())
      for (std::size_t i = 0; i < k; ++i) sorted.dual[i] = inv_p[ring.dual[p[i]]];
    ring = std::move(sorted);
    perms.push_back(std::move(p));
  }
  for (auto& blk : out.blocks) {
    const auto& orig = data.blocks[static_cast<std::size_t>(&blk - out.blocks.data())];
    const std::size_t s = blk.simple_count();
    for (std::size_t x = 0; x < perms[blk.from].size(); ++x)
      for (std::size_t m = 0; m < s; ++m)
        for (std::size_t m2 = 0; m2 < s; ++m2) blk.left(x, m, m2) = orig.left(perms[blk.from][x], m, m2);
    for (std::size_t y = 0; y < perms[blk.to].size(); ++y)
      for (std::size_t m = 0; m < s; ++m)
        for (std::size_t m2 = 0; m2 < s; ++m2) blk.right(y, m, m2) = orig.right(perms[blk.to][y], m, m2);
  }
  return out;
}

// Block (a, b) of the Gram matrix of induced objects:
//   M_ab[X][Y] = sum_{Z, W in Hom} mult(W in Y.Z) mult(W in Z.X).
// On diagonal blocks Hom(a, a) = End(a) with the ring's own products. Off
// the diagonal, the ring acting on the right of the stored block supplies Y.Z
// and the ring acting on the left supplies Z.X; this orientation reproduces
// the extended Haagerup golden matrix. The transposed block is obtained by
// transposition.
inline IntMatrix build_gram_matrix(const TwoCategoryData& data) {
  const std::size_t n = data.total_simples();
  const auto off = data.offsets();
  Matrix<std::int64_t> m(n, n, 0);
  for (std::size_t a = 0; a < data.rings.size(); ++a) {
    const auto& ring = data.rings[a];
    const std::size_t k = ring.rank();
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t y = 0; y < k; ++y) {
        std::int64_t sum = 0;
        for (std::size_t z = 0; z < k; ++z)
          for (std::size_t w = 0; w < k; ++w) sum += ring.N(y, z, w) * ring.N(z, x, w);
        m(off[a] + x, off[a] + y) = sum;
      }
  }
  for (const auto& blk : data.blocks) {
    const std::size_t a = blk.from, b = blk.to;
    const std::size_t s = blk.simple_count();
    for (std::size_t x = 0; x < data.rings[a].rank(); ++x)
      for (std::size_t y = 0; y < data.rings[b].rank(); ++y) {
        std::int64_t sum = 0;
        for (std::size_t z = 0; z < s; ++z)
          for (std::size_t w = 0; w < s; ++w) sum += blk.right(y, z, w) * blk.left(x, z, w);
        m(off[a] + x, off[b] + y) = sum;
        m(off[b] + y, off[a] + x) = sum;
      }
  }
  if (!m.is_symmetric()) {
    throw InvariantViolation("Gram matrix is not symmetric; check the orientation of the fusion data");
  }
  return to_big(m);
}

struct DimensionVectors {
  std::vector<std::vector<CycloNumber>> v;
};

inline DimensionVectors build_dimension_vectors(const TwoCategoryData& data) {
  const std::size_t n = data.total_simples();
  const auto off = data.offsets();
  DimensionVectors out;
  for (std::size_t a = 0; a < data.rings.size(); ++a) {
    std::vector<CycloNumber> v(n, CycloNumber(data.conductor));
    for (std::size_t i = 0; i < data.rings[a].rank(); ++i) v[off[a] + i] = data.rings[a].dims[i];
    out.v.push_back(std::move(v));
  }
  return out;
}

// Relative tolerance for the Frobenius-Perron eigenvalue of M against k*D.
inline constexpr double kFrobeniusPerronRelTol = 1e-6;

inline DecompositionProblem build_problem(const TwoCategoryData& data) {
  if (data.rings.empty()) throw InvalidArgument("no objects");
  const CycloNumber dim = global_dimension(data.rings[0]);
  for (std::size_t a = 1; a < data.rings.size(); ++a) {
    if (!(global_dimension(data.rings[a]) == dim)) {
      throw InconsistentData("global dimension of " + data.rings[a].name + " differs from " + data.rings[0].name);
    }
  }
  DecompositionProblem p;
  p.M = build_gram_matrix(data);
  p.vs = build_dimension_vectors(data).v;
  p.D = dim;
  p.conductor = data.conductor;
  for (const auto& r : data.rings) {
    p.layout.push_back(r.rank());
    p.object_names.push_back(r.name);
  }
  const double fp = max_eigenvalue_estimate(p.M);
  const double expected = static_cast<double>(data.rings.size()) * dim.to_complex().real();
  if (std::abs(fp - expected) > kFrobeniusPerronRelTol * std::abs(expected)) {
    std::ostringstream os;
    os << "Frobenius-Perron eigenvalue of M is " << fp << ", expected k*D = " << expected;
    throw InconsistentData(os.str());
  }
  return p;
}

}  // namespace center_scope
