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

// Command-line front end: validate, gram, decompose, verify, oracle.
//
// Exit codes: 0 ok, 2 validation failure, 3 I/O or parse error,
// 4 truncated search.

#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "center_scope/fusion_data.hpp"
#include "center_scope/io.hpp"
#include "center_scope/solver.hpp"

namespace center_scope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitTruncated = 4;

struct RunManifest {
  std::string command;
  std::string input;
  std::string second_input;
  std::string output;
  SolverConfig config;
  std::string psd_mode = "numeric";
  std::string minor_subset;
  std::optional<double> timeout;
  bool sort_by_dimension = false;
  bool no_reduction = false;
};

namespace detail {

inline std::size_t default_threads() {
  if (const char* env = std::getenv("CENTER_SCOPE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

// Loaded input: either fusion data (validated) or a direct problem.
struct Loaded {
  std::optional<TwoCategoryData> data;
  DecompositionProblem problem;
};

class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

inline TwoCategoryData load_fusion(const io::json& j, bool sort, std::ostream& err) {
  TwoCategoryData data = io::fusion_data_from_json(j);
  const auto report = validate(data);
  if (!report.ok()) {
    err << report.to_string();
    throw Failure(kExitInvalid, "fusion data failed validation");
  }
  return sort ? sort_simples_by_dimension(data) : data;
}

inline Loaded load_input(const std::string& path, bool sort, std::ostream& err) {
  const auto j = io::read_json_file(path);
  Loaded out;
  if (io::classify(j) == io::InputKind::problem) {
    out.problem = io::problem_from_json(j);
    return out;
  }
  out.data = load_fusion(j, sort, err);
  try {
    out.problem = build_problem(*out.data);
  } catch (const InconsistentData& e) {
    throw Failure(kExitInvalid, e.what());
  }
  return out;
}

inline std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(static_cast<std::size_t>(std::stoul(item)));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--minor-subset", "expected comma-separated indices, got '" + text + "'");
    }
  }
  return out;
}

inline std::string summary_line(const SearchResult& r) {
  std::ostringstream os;
  const std::size_t n = r.solutions.size();
  os << n << (n == 1 ? " solution" : " solutions");
  if (n > 0) {
    os << ", ";
    for (std::size_t i = 0; i < n; ++i) os << (i ? "/" : "") << r.solutions[i].column_count;
    os << " columns";
  }
  if (r.truncated) os << " (truncated: " << r.truncation_reason << ")";
  os << "; " << r.stats.nodes << " search nodes; " << r.stats.wall_seconds << " s";
  return os.str();
}

inline int cmd_validate(const RunManifest& run, std::ostream& out, std::ostream& err) {
  const auto j = io::read_json_file(run.input);
  if (io::classify(j) == io::InputKind::problem) {
    io::problem_from_json(j);
    out << "pass (problem file)\n";
    return kExitOk;
  }
  const auto data = io::fusion_data_from_json(j);
  const auto report = validate(data);
  out << report.to_string();
  (void)err;
  return report.ok() ? kExitOk : kExitInvalid;
}

inline int cmd_gram(const RunManifest& run, std::ostream& out, std::ostream& err) {
  const auto loaded = load_input(run.input, run.sort_by_dimension, err);
  const auto j = io::to_json(loaded.problem);
  if (run.output.empty()) {
    out << j.dump(2) << "\n";
  } else {
    io::write_json_file(run.output, j);
    out << "wrote " << run.output << "\n";
  }
  return kExitOk;
}

inline int cmd_decompose(const RunManifest& run, std::ostream& out, std::ostream& err) {
  const auto loaded = load_input(run.input, run.sort_by_dimension, err);
  SolverConfig cfg = run.config;
  if (run.psd_mode == "exact") {
    cfg.psd_mode = PsdMode::exact;
  } else if (run.psd_mode == "numeric") {
    cfg.psd_mode = PsdMode::numeric;
  } else {
    throw CLI::ValidationError("--psd-mode", "expected numeric or exact");
  }
  cfg.time_limit_seconds = run.timeout;
  cfg.use_reduction = !run.no_reduction;
  if (!run.minor_subset.empty()) cfg.minor_subset = parse_index_list(run.minor_subset);
  const auto result = search_all(loaded.problem, cfg);
  if (!run.output.empty()) io::write_json_file(run.output, io::to_json(result, loaded.problem));
  const auto& names = loaded.problem.object_names;
  for (std::size_t s = 0; s < result.solutions.size(); ++s) {
    const auto& sol = result.solutions[s];
    out << "solution " << s + 1 << " (" << sol.column_count << " columns)\n";
    for (std::size_t b = 0; b < sol.blocks.size(); ++b) {
      out << "  " << (b < names.size() ? names[b] : "block " + std::to_string(b)) << ":\n";
      for (const auto& line : io::grid_lines(sol.blocks[b])) out << "    " << line << "\n";
    }
  }
  out << summary_line(result) << "\n";
  return result.truncated ? kExitTruncated : kExitOk;
}

inline IntMatrix load_candidate(const std::string& path) {
  const auto j = io::read_json_file(path);
  if (j.is_array()) return io::int_matrix_from_json(j, "");
  if (j.is_object() && j.contains("A")) return io::int_matrix_from_json(j["A"], "/A");
  if (j.is_object() && j.contains("solutions") && j["solutions"].is_array() && !j["solutions"].empty()) {
    return io::int_matrix_from_json(j["solutions"][0]["A"], "/solutions/0/A");
  }
  throw io::ParseError(path, "expected a matrix, {\"A\": ...}, or a results file");
}

inline int cmd_verify(const RunManifest& run, std::ostream& out, std::ostream& err) {
  const auto loaded = load_input(run.input, run.sort_by_dimension, err);
  const IntMatrix a = load_candidate(run.second_input);
  if (a.rows() != loaded.problem.size()) {
    err << "shape mismatch: candidate has " << a.rows() << " rows, problem has " << loaded.problem.size() << "\n";
    return kExitParse;
  }
  const auto report = verify_report(a, loaded.problem, run.config.forbid_zero_dots);
  if (report.ok) {
    out << "true\n";
    return kExitOk;
  }
  out << "false\n";
  for (const auto& issue : report.issues) out << "  " << issue << "\n";
  return kExitInvalid;
}

inline int cmd_oracle(const RunManifest& run, std::ostream& out, std::ostream& err) {
  const auto j = io::read_json_file(run.input);
  IntMatrix m;
  if (j.is_array()) {
    m = io::int_matrix_from_json(j, "");
  } else if (io::classify(j) == io::InputKind::problem) {
    m = io::problem_from_json(j).M;
  } else {
    m = load_input(run.input, run.sort_by_dimension, err).problem.M;
  }
  const auto all = brute_force_decompositions(m);
  io::json j_out = io::json::array();
  for (const auto& cols : all) j_out.push_back(cols);
  if (!run.output.empty()) io::write_json_file(run.output, j_out);
  for (const auto& cols : all) {
    out << cols.size() << " columns:";
    for (const auto& c : cols) {
      out << " (";
      for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
      out << ")";
    }
    out << "\n";
  }
  out << all.size() << " decompositions\n";
  return kExitOk;
}

}  // namespace detail

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Enumerate algebraic decompositions of induction Gram matrices"};
  app.require_subcommand(1);
  RunManifest run;
  run.config.thread_count = detail::default_threads();

  auto* validate_cmd = app.add_subcommand("validate", "Check fusion data invariants");
  validate_cmd->add_option("input", run.input, "Fusion data or problem file")->required();

  auto* gram_cmd = app.add_subcommand("gram", "Write the problem (M, v, D) built from fusion data");
  gram_cmd->add_option("input", run.input)->required();
  gram_cmd->add_option("-o,--output", run.output, "Problem file to write");
  gram_cmd->add_flag("--sort-by-dimension", run.sort_by_dimension, "Reorder simples by dimension");

  auto* decompose_cmd = app.add_subcommand("decompose", "Enumerate all algebraic decompositions");
  decompose_cmd->add_option("input", run.input)->required();
  decompose_cmd->add_option("-o,--output", run.output, "Results file to write");
  decompose_cmd->add_option("--psd-mode", run.psd_mode, "numeric or exact")->check(CLI::IsMember({"numeric", "exact"}));
  decompose_cmd->add_option("--eig-tol", run.config.eig_tolerance, "Eigenvalue acceptance threshold (<= 0)")
      ->check(CLI::Range(-1e9, 0.0));
  decompose_cmd->add_option("--max-solutions", run.config.max_solutions);
  decompose_cmd->add_option("--max-columns", run.config.max_columns);
  decompose_cmd->add_option("--threads", run.config.thread_count)->check(CLI::PositiveNumber);
  decompose_cmd->add_option("--timeout", run.timeout, "Wall-clock limit in seconds");
  decompose_cmd->add_option("--minor-subset", run.minor_subset, "Comma-separated row indices for the reduction");
  decompose_cmd->add_flag("--forbid-zero-dots", run.config.forbid_zero_dots);
  decompose_cmd->add_flag("--no-reduction", run.no_reduction, "Search directly on M");
  decompose_cmd->add_flag("--sort-by-dimension", run.sort_by_dimension);

  auto* verify_cmd = app.add_subcommand("verify", "Check a candidate decomposition");
  verify_cmd->add_option("problem", run.input)->required();
  verify_cmd->add_option("candidate", run.second_input)->required();
  verify_cmd->add_flag("--forbid-zero-dots", run.config.forbid_zero_dots);

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force all decompositions of a small matrix");
  oracle_cmd->add_option("input", run.input)->required();
  oracle_cmd->add_option("-o,--output", run.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*validate_cmd) return detail::cmd_validate(run, out, err);
    if (*gram_cmd) return detail::cmd_gram(run, out, err);
    if (*decompose_cmd) return detail::cmd_decompose(run, out, err);
    if (*verify_cmd) return detail::cmd_verify(run, out, err);
    if (*oracle_cmd) return detail::cmd_oracle(run, out, err);
  } catch (const detail::Failure& e) {
    err << e.what() << "\n";
    return e.code();
  } catch (const io::ParseError& e) {
    err << "parse error at " << e.what() << "\n";
    return kExitParse;
  } catch (const CLI::Error& e) {
    err << e.what() << "\n";
    return kExitParse;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const InconsistentData& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitParse;
}

}  // namespace center_scope::cli
