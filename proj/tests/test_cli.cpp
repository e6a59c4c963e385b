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

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "center_scope/cli.hpp"
#include "support.hpp"

using namespace center_scope;
using center_scope::testing::data_path;
using center_scope::testing::golden_int;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "center_scope");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("center_scope_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const io::json& j) const {
    io::write_json_file(path(name), j);
    return path(name);
  }

  std::string write_text(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static io::json without_timing(io::json j) {
    j["stats"].erase("wall_seconds");
    return j;
  }

  fs::path dir_;
};

IntMatrix eh_stacked() {
  const auto a = golden_int("I_EH1"), b = golden_int("I_EH2");
  IntMatrix out(14, 22, BigInt(0));
  for (std::size_t j = 0; j < 22; ++j) {
    for (std::size_t i = 0; i < 6; ++i) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < 8; ++i) out(6 + i, j) = b(i, j);
  }
  return out;
}

}  // namespace

TEST_F(CliTest, ValidateFixtures) {
  auto r = run_cli({"validate", data_path("extended_haagerup.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "pass\n");
  EXPECT_EQ(run_cli({"validate", data_path("fibonacci.json")}).code, 0);
}

TEST_F(CliTest, ValidateBrokenAssociativity) {
  auto j = io::read_json_file(data_path("extended_haagerup.json"));
  j["objects"][0]["fusion"][1][2][3] = j["objects"][0]["fusion"][1][2][3].get<int>() + 1;
  const auto r = run_cli({"validate", write("broken.json", j)});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("associativity"), std::string::npos) << r.out;
}

TEST_F(CliTest, ParseErrors) {
  auto r = run_cli({"validate", write_text("bad.json", "{\"conductor\": 5, \"objects\": [")});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run_cli({"validate", path("missing.json")}).code, 3);
  auto j = io::read_json_file(data_path("fibonacci.json"));
  j["objects"][0]["dims"][1]["coeffs"][0] = "1/0";
  r = run_cli({"validate", write("zero_den.json", j)});
  EXPECT_EQ(r.code, 3);
  j = io::read_json_file(data_path("fibonacci.json"));
  j["objects"][0].erase("dims");
  r = run_cli({"validate", write("no_dims.json", j)});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("/objects/0"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"frobnicate"}).code, 3);
  EXPECT_EQ(run_cli({"decompose", data_path("fibonacci.json"), "--psd-mode", "fuzzy"}).code, 3);
  EXPECT_EQ(run_cli({"decompose", data_path("fibonacci.json"), "--eig-tol", "0.5"}).code, 3);
  EXPECT_EQ(run_cli({"decompose", data_path("fibonacci.json"), "--threads", "0"}).code, 3);
  EXPECT_EQ(run_cli({"decompose", data_path("fibonacci.json"), "--minor-subset", "0,x"}).code, 3);
}

TEST_F(CliTest, GramFixtures) {
  ASSERT_EQ(run_cli({"gram", data_path("extended_haagerup.json"), "-o", path("eh.json")}).code, 0);
  const auto p = io::problem_from_json(io::read_json_file(path("eh.json")));
  EXPECT_EQ(p.M, golden_int("M"));
  EXPECT_EQ(p.D, center_scope::testing::eh_global_dimension());
  EXPECT_EQ(p.vs.size(), 2u);
  EXPECT_EQ(p.layout, (std::vector<std::size_t>{6, 8}));

  ASSERT_EQ(run_cli({"gram", data_path("trivial.json"), "-o", path("t.json")}).code, 0);
  const auto t = io::problem_from_json(io::read_json_file(path("t.json")));
  EXPECT_EQ(t.M, (IntMatrix{{1}}));
  EXPECT_EQ(t.D, CycloNumber(1, 1));

  const auto f = run_cli({"gram", data_path("fibonacci.json")});
  ASSERT_EQ(f.code, 0);
  EXPECT_EQ(io::problem_from_json(io::json::parse(f.out)).M, (IntMatrix{{2, 1}, {1, 3}}));
}

TEST_F(CliTest, GramInconsistentGlobalDimension) {
  auto j = io::read_json_file(data_path("one_four_one.json"));
  const auto fib = io::read_json_file(data_path("fibonacci.json"));
  j["objects"][1]["fusion"] = fib["objects"][0]["fusion"];
  j["objects"][1]["dims"] = fib["objects"][0]["dims"];
  j["bimodules"] = io::json::array();
  EXPECT_EQ(run_cli({"gram", write("mixed.json", j)}).code, 2);
}

TEST_F(CliTest, DecomposeExtendedHaagerup) {
  const auto r = run_cli({"decompose", data_path("extended_haagerup.json"), "-o", path("eh_results.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1 solution, 22 columns"), std::string::npos) << r.out;
  const auto j = io::read_json_file(path("eh_results.json"));
  EXPECT_EQ(j["solution_count"], 1);
  EXPECT_EQ(j["truncated"], false);
  const auto& blocks = j["solutions"][0]["blocks"];
  EXPECT_EQ(io::int_matrix_from_json(blocks[0]["matrix"], ""), golden_int("I_EH1"));
  EXPECT_EQ(io::int_matrix_from_json(blocks[1]["matrix"], ""), golden_int("I_EH2"));
  EXPECT_EQ(blocks[0]["object"], "EH1");
  EXPECT_EQ(blocks[0]["grid"].size(), 6u);
  EXPECT_EQ(j["solutions"][0]["dots"].size(), 2u);
  EXPECT_EQ(j["reduction"]["rows"], io::json::array({0, 6, 12, 7, 5, 3}));
}

TEST_F(CliTest, DecomposeSmallAndTruncated) {
  auto r = run_cli({"decompose", data_path("fibonacci.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1 solution, 4 columns"), std::string::npos) << r.out;

  r = run_cli({"decompose", data_path("fibonacci.json"), "--max-solutions", "0", "-o", path("none.json")});
  EXPECT_EQ(r.code, 4);
  const auto j = io::read_json_file(path("none.json"));
  EXPECT_TRUE(j["solutions"].empty());
  EXPECT_EQ(j["truncated"], true);

  r = run_cli({"decompose", data_path("extended_haagerup.json"), "--no-reduction", "--timeout", "0.2"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("time_limit"), std::string::npos);

  r = run_cli({"decompose", data_path("extended_haagerup.json"), "--minor-subset", "0,6,12,7,5,3", "--psd-mode", "exact"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1 solution, 22 columns"), std::string::npos);
}

TEST_F(CliTest, DecomposeReproducibleAndRoundTrip) {
  ASSERT_EQ(run_cli({"decompose", data_path("one_four_one.json"), "-o", path("a.json")}).code, 0);
  ASSERT_EQ(run_cli({"decompose", data_path("one_four_one.json"), "-o", path("b.json")}).code, 0);
  EXPECT_EQ(without_timing(io::read_json_file(path("a.json"))), without_timing(io::read_json_file(path("b.json"))));

  ASSERT_EQ(run_cli({"gram", data_path("one_four_one.json"), "-o", path("p.json")}).code, 0);
  ASSERT_EQ(run_cli({"decompose", path("p.json"), "-o", path("c.json")}).code, 0);
  EXPECT_EQ(without_timing(io::read_json_file(path("a.json"))), without_timing(io::read_json_file(path("c.json"))));

  ::setenv("CENTER_SCOPE_THREADS", "4", 1);
  ASSERT_EQ(run_cli({"decompose", data_path("one_four_one.json"), "-o", path("d.json")}).code, 0);
  ::unsetenv("CENTER_SCOPE_THREADS");
  EXPECT_EQ(without_timing(io::read_json_file(path("a.json"))), without_timing(io::read_json_file(path("d.json"))));
}

TEST_F(CliTest, Verify) {
  ASSERT_EQ(run_cli({"gram", data_path("extended_haagerup.json"), "-o", path("eh.json")}).code, 0);
  const auto A = eh_stacked();
  auto r = run_cli({"verify", path("eh.json"), write("a.json", io::json{{"A", io::to_json(A)}})});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");

  auto zeroed = A;
  for (std::size_t i = 0; i < 14; ++i) zeroed(i, 0) = 0;
  r = run_cli({"verify", path("eh.json"), write("z.json", io::to_json(zeroed))});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out.rfind("false\n", 0), 0u);
  EXPECT_NE(r.out.find("AA^T mismatch at (1,1)"), std::string::npos) << r.out;

  r = run_cli({"verify", path("eh.json"), write("s.json", io::to_json(golden_int("I_EH1")))});
  EXPECT_EQ(r.code, 3);

  ASSERT_EQ(run_cli({"decompose", data_path("fibonacci.json"), "-o", path("fib.json")}).code, 0);
  r = run_cli({"verify", data_path("fibonacci.json"), path("fib.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");
}

TEST_F(CliTest, Oracle) {
  const auto r = run_cli({"oracle", write("m.json", io::json::array({io::json::array({4})})), "-o", path("o.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("2 decompositions"), std::string::npos);
  EXPECT_EQ(io::read_json_file(path("o.json")).size(), 2u);
  EXPECT_EQ(run_cli({"oracle", data_path("extended_haagerup.json")}).code, 3);
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string bin = CENTER_SCOPE_CLI;
  auto status = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("validate " + data_path("fibonacci.json")), 0);
  EXPECT_EQ(status("decompose " + data_path("fibonacci.json") + " --max-solutions 0"), 4);
  EXPECT_EQ(status("validate " + path("missing.json")), 3);
  EXPECT_EQ(status("--help"), 0);
}
