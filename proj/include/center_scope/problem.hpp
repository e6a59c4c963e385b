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

#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "center_scope/cyclotomic.hpp"
#include "center_scope/errors.hpp"
#include "center_scope/matrix.hpp"

namespace center_scope {

// The triple (M, {v_i}, D): find nonnegative integer A with M = A A^T whose
// column dot products with every v_i are d-numbers dividing D.
struct DecompositionProblem {
  IntMatrix M;
  std::vector<std::vector<CycloNumber>> vs;
  CycloNumber D;
  std::size_t conductor = 1;
  // Rows per object, for splitting results into per-object blocks.
  // Empty means a single block.
  std::vector<std::size_t> layout;
  std::vector<std::string> object_names;

  std::size_t size() const { return M.rows(); }

  std::vector<std::size_t> effective_layout() const {
    if (layout.empty()) return {M.rows()};
    return layout;
  }

  void check() const {
    if (!M.is_square()) throw InvalidArgument("problem matrix must be square");
    if (!M.is_symmetric()) throw InvalidArgument("problem matrix must be symmetric");
    for (const auto& x : M.data())
      if (x < 0) throw InvalidArgument("problem matrix must be entrywise non-negative");
    if (D.conductor() != conductor) throw InvalidArgument("global dimension has the wrong conductor");
    for (const auto& v : vs) {
      if (v.size() != M.rows()) throw InvalidArgument("dimension vector length does not match matrix size");
      for (const auto& x : v)
        if (x.conductor() != conductor) throw InvalidArgument("dimension vector entry has the wrong conductor");
    }
    if (!layout.empty() && std::accumulate(layout.begin(), layout.end(), std::size_t{0}) != M.rows()) {
      throw InvalidArgument("layout does not sum to the matrix size");
    }
  }
};

}  // namespace center_scope
