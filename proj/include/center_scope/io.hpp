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

// JSON encodings of numbers, matrices, fusion data, problems and results.
//
//   CycloNumber   {"conductor": n, "coeffs": ["p/q", ...]}   (phi(n) entries)
//   IntMatrix     [[1, 2], [3, 4]]   (decimal strings accepted for big values)
//   RatMatrix     [["1", "-1/2"], ...]
//   fusion data   {"conductor", "objects": [...], "bimodules": [...]}
//   problem       {"conductor", "M", "v", "D", "layout"?, "object_names"?}

#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "center_scope/cyclotomic.hpp"
#include "center_scope/errors.hpp"
#include "center_scope/fusion_data.hpp"
#include "center_scope/matrix.hpp"
#include "center_scope/problem.hpp"
#include "center_scope/solver.hpp"

namespace center_scope::io {

using nlohmann::json;

// Malformed input. `path` is a JSON-pointer-like location.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace detail {

inline std::string at(const std::string& base, const std::string& key) { return base + "/" + key; }
inline std::string at(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(at(path, key), "missing field");
  return *it;
}

inline const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

inline std::size_t to_size(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw ParseError(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

}  // namespace detail

inline BigRational rational_from_json(const json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return BigRational(to_bigint(j.get<std::int64_t>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(path, e.what());
  }
  throw ParseError(path, "expected an integer or a \"p/q\" string");
}

inline BigInt integer_from_json(const json& j, const std::string& path) {
  const BigRational q = rational_from_json(j, path);
  if (!is_integer(q)) throw ParseError(path, "expected an integer");
  return q.get_num();
}

inline json to_json(const BigRational& q) { return to_string(q); }

inline json to_json(const CycloNumber& x) {
  json coeffs = json::array();
  for (const auto& c : x.coeffs()) coeffs.push_back(to_string(c));
  return json{{"conductor", x.conductor()}, {"coeffs", coeffs}};
}

// A bare integer or "p/q" string is read as a rational in Q(zeta_n).
inline CycloNumber cyclo_from_json(const json& j, std::size_t conductor, const std::string& path) {
  if (!j.is_object()) return CycloNumber(conductor, rational_from_json(j, path));
  const std::size_t n = detail::to_size(detail::field(j, "conductor", path), detail::at(path, "conductor"));
  if (n != conductor) {
    throw ParseError(detail::at(path, "conductor"),
                     "conductor " + std::to_string(n) + " differs from " + std::to_string(conductor));
  }
  const auto& arr = detail::array(detail::field(j, "coeffs", path), detail::at(path, "coeffs"));
  std::vector<BigRational> coeffs;
  for (std::size_t i = 0; i < arr.size(); ++i) coeffs.push_back(rational_from_json(arr[i], detail::at(detail::at(path, "coeffs"), i)));
  try {
    return CycloNumber::from_coeffs(n, std::move(coeffs));
  } catch (const std::exception& e) {
    throw ParseError(detail::at(path, "coeffs"), e.what());
  }
}

inline json to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (fits_int64(m(i, j))) {
        row.push_back(to_int64(m(i, j)));
      } else {
        row.push_back(to_string(m(i, j)));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const RatMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IntMatrix int_matrix_from_json(const json& j, const std::string& path) {
  const auto& rows = detail::array(j, path);
  std::vector<BigInt> data;
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = detail::array(rows[i], detail::at(path, i));
    if (i == 0) cols = row.size();
    if (row.size() != cols) throw ParseError(detail::at(path, i), "ragged matrix row");
    for (std::size_t k = 0; k < row.size(); ++k) data.push_back(integer_from_json(row[k], detail::at(detail::at(path, i), k)));
  }
  return IntMatrix(rows.size(), cols, std::move(data));
}

// k matrices, each s1 x s2, into a Multiplicities table.
inline Multiplicities table_from_json(const json& j, std::size_t k, std::size_t s1, std::size_t s2,
                                      const std::string& path) {
  const auto& mats = detail::array(j, path);
  if (mats.size() != k) {
    throw ParseError(path, "expected " + std::to_string(k) + " matrices, got " + std::to_string(mats.size()));
  }
  Multiplicities t(k, s1, s2);
  for (std::size_t a = 0; a < k; ++a) {
    const IntMatrix m = int_matrix_from_json(mats[a], detail::at(path, a));
    if (m.rows() != s1 || m.cols() != s2) {
      throw ParseError(detail::at(path, a), "expected a " + std::to_string(s1) + "x" + std::to_string(s2) + " matrix");
    }
    for (std::size_t b = 0; b < s1; ++b)
      for (std::size_t c = 0; c < s2; ++c) t(a, b, c) = to_int64(m(b, c));
  }
  return t;
}

inline json table_to_json(const Multiplicities& t) {
  json out = json::array();
  for (std::size_t a = 0; a < t.extent(0); ++a) {
    json m = json::array();
    for (std::size_t b = 0; b < t.extent(1); ++b) {
      json row = json::array();
      for (std::size_t c = 0; c < t.extent(2); ++c) row.push_back(t(a, b, c));
      m.push_back(std::move(row));
    }
    out.push_back(std::move(m));
  }
  return out;
}

namespace detail {

inline std::size_t simple_count(const json& j, const std::string& path) {
  if (j.is_array()) return j.size();
  return to_size(j, path);
}

}  // namespace detail

inline TwoCategoryData fusion_data_from_json(const json& j) {
  const std::string root;
  TwoCategoryData data;
  data.conductor = detail::to_size(detail::field(j, "conductor", root), "/conductor");
  if (data.conductor == 0) throw ParseError("/conductor", "conductor must be positive");
  const auto& objects = detail::array(detail::field(j, "objects", root), "/objects");
  std::vector<std::string> names;
  for (std::size_t a = 0; a < objects.size(); ++a) {
    const std::string path = detail::at("/objects", a);
    const auto& obj = objects[a];
    FusionRing ring;
    const auto& nm = detail::field(obj, "name", path);
    if (!nm.is_string()) throw ParseError(detail::at(path, "name"), "expected a string");
    ring.name = nm.get<std::string>();
    const std::size_t k = detail::simple_count(detail::field(obj, "simples", path), detail::at(path, "simples"));
    ring.N = table_from_json(detail::field(obj, "fusion", path), k, k, k, detail::at(path, "fusion"));
    if (obj.contains("unit")) ring.unit = detail::to_size(obj["unit"], detail::at(path, "unit"));
    if (obj.contains("dual")) {
      const auto& d = detail::array(obj["dual"], detail::at(path, "dual"));
      for (std::size_t i = 0; i < d.size(); ++i) ring.dual.push_back(detail::to_size(d[i], detail::at(detail::at(path, "dual"), i)));
    }
    const auto& dims = detail::array(detail::field(obj, "dims", path), detail::at(path, "dims"));
    for (std::size_t i = 0; i < dims.size(); ++i) {
      ring.dims.push_back(cyclo_from_json(dims[i], data.conductor, detail::at(detail::at(path, "dims"), i)));
    }
    names.push_back(ring.name);
    data.rings.push_back(std::move(ring));
  }
  auto object_index = [&](const json& v, const std::string& path) -> std::size_t {
    if (v.is_string()) {
      for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == v.get<std::string>()) return i;
      throw ParseError(path, "unknown object '" + v.get<std::string>() + "'");
    }
    const std::size_t i = detail::to_size(v, path);
    if (i >= names.size()) throw ParseError(path, "object index out of range");
    return i;
  };
  if (j.contains("bimodules")) {
    const auto& blocks = detail::array(j["bimodules"], "/bimodules");
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const std::string path = detail::at("/bimodules", b);
      const auto& obj = blocks[b];
      BimoduleBlock blk;
      blk.from = object_index(detail::field(obj, "from", path), detail::at(path, "from"));
      blk.to = object_index(detail::field(obj, "to", path), detail::at(path, "to"));
      const std::size_t s = detail::simple_count(detail::field(obj, "simples", path), detail::at(path, "simples"));
      blk.left = table_from_json(detail::field(obj, "left_action", path), data.rings[blk.from].rank(), s, s,
                                 detail::at(path, "left_action"));
      blk.right = table_from_json(detail::field(obj, "right_action", path), data.rings[blk.to].rank(), s, s,
                                  detail::at(path, "right_action"));
      data.blocks.push_back(std::move(blk));
    }
  }
  return data;
}

inline json to_json(const TwoCategoryData& data) {
  json objects = json::array();
  for (const auto& ring : data.rings) {
    json dims = json::array();
    for (const auto& d : ring.dims) dims.push_back(to_json(d));
    json obj{{"name", ring.name}, {"simples", ring.rank()}, {"unit", ring.unit}, {"fusion", table_to_json(ring.N)},
             {"dims", dims}};
    if (!ring.dual.empty()) obj["dual"] = ring.dual;
    objects.push_back(std::move(obj));
  }
  json blocks = json::array();
  for (const auto& blk : data.blocks) {
    blocks.push_back(json{{"from", data.rings[blk.from].name},
                          {"to", data.rings[blk.to].name},
                          {"simples", blk.simple_count()},
                          {"left_action", table_to_json(blk.left)},
                          {"right_action", table_to_json(blk.right)}});
  }
  return json{{"conductor", data.conductor}, {"objects", objects}, {"bimodules", blocks}};
}

inline DecompositionProblem problem_from_json(const json& j) {
  const std::string root;
  DecompositionProblem p;
  p.conductor = detail::to_size(detail::field(j, "conductor", root), "/conductor");
  if (p.conductor == 0) throw ParseError("/conductor", "conductor must be positive");
  p.M = int_matrix_from_json(detail::field(j, "M", root), "/M");
  if (j.contains("v")) {
    const auto& vs = detail::array(j["v"], "/v");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const auto& v = detail::array(vs[i], detail::at("/v", i));
      std::vector<CycloNumber> vec;
      for (std::size_t k = 0; k < v.size(); ++k) vec.push_back(cyclo_from_json(v[k], p.conductor, detail::at(detail::at("/v", i), k)));
      p.vs.push_back(std::move(vec));
    }
  }
  p.D = cyclo_from_json(detail::field(j, "D", root), p.conductor, "/D");
  if (j.contains("layout")) {
    const auto& l = detail::array(j["layout"], "/layout");
    for (std::size_t i = 0; i < l.size(); ++i) p.layout.push_back(detail::to_size(l[i], detail::at("/layout", i)));
  }
  if (j.contains("object_names")) {
    for (const auto& s : detail::array(j["object_names"], "/object_names")) p.object_names.push_back(s.get<std::string>());
  }
  try {
    p.check();
  } catch (const InvalidArgument& e) {
    throw ParseError("/", e.what());
  }
  return p;
}

inline json to_json(const DecompositionProblem& p) {
  json vs = json::array();
  for (const auto& v : p.vs) {
    json vec = json::array();
    for (const auto& x : v) vec.push_back(to_json(x));
    vs.push_back(std::move(vec));
  }
  json out{{"conductor", p.conductor}, {"M", to_json(p.M)}, {"v", vs}, {"D", to_json(p.D)}};
  if (!p.layout.empty()) out["layout"] = p.layout;
  if (!p.object_names.empty()) out["object_names"] = p.object_names;
  return out;
}

enum class InputKind { fusion_data, problem };

// Fusion data and problem files share one extension; the top-level keys
// tell them apart.
inline InputKind classify(const json& j) {
  if (!j.is_object()) throw ParseError("", "top level must be an object");
  if (j.contains("M")) return InputKind::problem;
  if (j.contains("objects")) return InputKind::fusion_data;
  throw ParseError("", "neither fusion data (\"objects\") nor a problem (\"M\")");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, "cannot open file for writing");
  out << j.dump(2) << "\n";
}

// Right-aligned text grid, one string per row.
inline std::vector<std::string> grid_lines(const IntMatrix& m) {
  std::size_t width = 1;
  for (const auto& x : m.data()) width = std::max(width, to_string(x).size());
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::ostringstream os;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << std::setw(static_cast<int>(width)) << to_string(m(i, j));
    }
    lines.push_back(os.str());
  }
  return lines;
}

inline json to_json(const InductionResult& r, const DecompositionProblem& p) {
  json blocks = json::array();
  const auto names = p.object_names;
  for (std::size_t b = 0; b < r.blocks.size(); ++b) {
    blocks.push_back(json{{"object", b < names.size() ? names[b] : std::to_string(b)},
                          {"matrix", to_json(r.blocks[b])},
                          {"grid", grid_lines(r.blocks[b])}});
  }
  json dots = json::array();
  for (const auto& per_v : r.dots) {
    json row = json::array();
    for (const auto& d : per_v) row.push_back(to_json(d));
    dots.push_back(std::move(row));
  }
  return json{{"columns", r.column_count}, {"A", to_json(r.A)}, {"grid", grid_lines(r.A)}, {"blocks", blocks}, {"dots", dots}};
}

inline json to_json(const SearchResult& res, const DecompositionProblem& p) {
  json sols = json::array();
  json counts = json::array();
  for (const auto& s : res.solutions) {
    sols.push_back(to_json(s, p));
    counts.push_back(s.column_count);
  }
  const auto& rp = res.reduction;
  json reduction{{"reduced", rp.reduced}, {"rank", rp.rank}, {"rows", rp.rows}, {"M_prime", to_json(rp.M_prime)}, {"R", to_json(rp.R)}};
  return json{{"solution_count", res.solutions.size()},
              {"column_counts", counts},
              {"truncated", res.truncated},
              {"truncation_reason", res.truncation_reason},
              {"reduction", reduction},
              {"solutions", sols},
              {"stats", {{"nodes", res.stats.nodes}, {"candidates_tested", res.stats.candidates_tested}, {"wall_seconds", res.stats.wall_seconds}}}};
}

}  // namespace center_scope::io
