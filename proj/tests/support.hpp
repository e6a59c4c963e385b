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

// Shared fixtures and random generators for the test suites.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "center_scope/fusion_data.hpp"
#include "center_scope/io.hpp"
#include "center_scope/solver.hpp"

namespace center_scope::testing {

inline std::string data_path(const std::string& name) { return std::string(CENTER_SCOPE_DATA_DIR) + "/" + name; }

inline TwoCategoryData load_fusion(const std::string& name) {
  return io::fusion_data_from_json(io::read_json_file(data_path(name)));
}

inline const io::json& eh_golden() {
  static const io::json j = io::read_json_file(data_path("extended_haagerup_golden.json"));
  return j;
}

inline IntMatrix golden_int(const std::string& key) { return io::int_matrix_from_json(eh_golden().at(key), key); }

inline RatMatrix golden_rat(const std::string& key) {
  const auto& rows = eh_golden().at(key);
  RatMatrix m(rows.size(), rows.at(0).size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = io::rational_from_json(rows[i][j], key);
  return m;
}

inline CycloNumber zeta(std::size_t n, std::size_t k = 1) { return CycloNumber::root_of_unity(n, k); }

inline CycloNumber rat(std::size_t n, long num, long den = 1) { return CycloNumber(n, BigRational(num, den)); }

// sum_k c_k zeta_n^k
inline CycloNumber poly_in_zeta(std::size_t n, const std::vector<long>& c) {
  std::vector<BigRational> raw;
  for (auto x : c) raw.emplace_back(x);
  return CycloNumber::make(n, raw);
}

// Printed global dimension of the extended Haagerup data, in Q(zeta_13).
inline CycloNumber eh_global_dimension() {
  std::vector<long> c(13, 0);
  c[11] = 50;
  c[10] = 50;
  c[9] = -125;
  c[7] = -125;
  c[6] = -125;
  c[4] = -125;
  c[3] = 50;
  c[2] = 50;
  c[0] = 170;
  return poly_in_zeta(13, c);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_); }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(xs.size()) - 1))];
  }

  // Random element of Q(zeta_n) with small numerators and denominators.
  CycloNumber cyclo(std::size_t n, std::int64_t bound = 5, bool integral = false) {
    std::vector<BigRational> raw(n);
    for (auto& c : raw) {
      c = BigRational(static_cast<long>(uniform(-bound, bound)), integral ? 1L : static_cast<long>(uniform(1, 4)));
      c.canonicalize();
    }
    return CycloNumber::make(n, raw);
  }

  CycloNumber nonzero_cyclo(std::size_t n, std::int64_t bound = 5) {
    for (;;) {
      auto x = cyclo(n, bound);
      if (!x.is_zero()) return x;
    }
  }

  // Random non-negative integer matrix with entries in [0, hi].
  IntMatrix int_matrix(std::size_t rows, std::size_t cols, std::int64_t hi) {
    IntMatrix m(rows, cols, BigInt(0));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = to_bigint(uniform(0, hi));
    return m;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline const std::vector<std::size_t>& sample_conductors() {
  static const std::vector<std::size_t> ns{1, 3, 4, 5, 7, 8, 12, 13};
  return ns;
}

}  // namespace center_scope::testing
