// Copyright 2026 The hybrid-hhl Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "hhl/cli.hpp"
#include "hhl/io.hpp"

using hhl::io::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hhl");
  std::ostringstream out, err;
  const int code = hhl::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int count_lines_starting(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += line.starts_with(prefix);
  return n;
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("hhl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

}  // namespace

TEST(cli, solve_hybrid_sampled) {
  const Result r = cli({"solve", "--lambda", "0.25", "--n", "2", "--mode", "hybrid", "--shots", "1024", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["fidelity"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(j["cnot_count"], 14);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["shots"], 1024);
}

TEST(cli, solve_original_exact) {
  const Result r = cli({"solve", "--lambda", "0.5", "--n", "2", "--mode", "original"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["success_prob"].get<double>(), 0.0625, 1e-12);
  EXPECT_EQ(j["shots"], 0);
}

TEST(cli, solve_not_reducible) {
  const Result r = cli({"solve", "--lambda", "0.3", "--n", "2", "--mode", "hybrid", "--max-n", "2"});
  EXPECT_EQ(r.code, hhl::kExitNotReducible);
  EXPECT_EQ(Json::parse(r.out)["status"], "not-reducible");
  EXPECT_FALSE(r.err.empty());
}

TEST(cli, validation_exit_codes) {
  EXPECT_EQ(cli({}).code, hhl::kExitValidation);
  EXPECT_EQ(cli({"bogus"}).code, hhl::kExitValidation);
  EXPECT_EQ(cli({"solve", "--lambda", "0.25", "--shots", "10"}).code, hhl::kExitValidation);
  EXPECT_EQ(cli({"solve", "--lambda", "1.5"}).code, hhl::kExitValidation);
  EXPECT_EQ(cli({"solve"}).code, hhl::kExitValidation);
  EXPECT_EQ(cli({"solve", "--lambda", "0.25", "--mode", "fast"}).code, hhl::kExitValidation);
  EXPECT_EQ(cli({"solve", "--lambda", "0.25", "--noise", "/nonexistent/noise.json"}).code, hhl::kExitValidation);
  EXPECT_EQ(cli({"sweep", "--k", ""}).code, hhl::kExitValidation);
  EXPECT_EQ(cli({"sweep", "--lambda-min", "0.8", "--lambda-max", "0.2"}).code, hhl::kExitValidation);
  EXPECT_EQ(cli({"qpea", "--lambda", "0.25", "--shots", "5"}).code, hhl::kExitValidation);
  EXPECT_EQ(cli({"emit-qasm", "--lambda", "0.25", "--mode", "nope"}).code, hhl::kExitValidation);
  const Result r = cli({"sweep", "--k", ""});
  EXPECT_TRUE(r.err.starts_with("error:"));
}

TEST(cli, sweep_curve) {
  const Result r = cli({"sweep"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "lambda,k,F_analytic,F_simulated,abs_err");
  int rows = 0, perfect = 0;
  double previous_lambda = 0.0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 5u);
    EXPECT_GE(v[0], previous_lambda);
    previous_lambda = v[0];
    EXPECT_LT(v[4], 1e-8) << line;
    if ((v[0] == 0.25 || v[0] == 0.5 || v[0] == 0.75) && v[1] >= 2) {
      EXPECT_NEAR(v[2], 1.0, 1e-12);
      ++perfect;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 199 * 3);
  EXPECT_EQ(perfect, 6);
}

TEST(cli, sweep_single_k) {
  const Result r = cli({"sweep", "--k", "1", "--points", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\n0.5,1,1,1,0\n"), std::string::npos);
}

TEST(cli, sweep_is_thread_count_independent) {
  ::setenv("HHL_THREADS", "1", 1);
  const std::string one = cli({"sweep", "--points", "25", "--format", "json"}).out;
  ::setenv("HHL_THREADS", "4", 1);
  const std::string four = cli({"sweep", "--points", "25", "--format", "json"}).out;
  ::unsetenv("HHL_THREADS");
  EXPECT_EQ(one, four);
  EXPECT_FALSE(one.empty());
}

TEST_F(CliFiles, qpea_histograms) {
  const Result quarter = cli({"qpea", "--lambda", "0.25", "--n", "2"});
  ASSERT_EQ(quarter.code, 0);
  EXPECT_NE(quarter.out.find("01,0,0.4999999999999999"), std::string::npos);
  const Result half = cli({"qpea", "--lambda", "0.5", "--n", "2", "--format", "json"});
  EXPECT_NEAR(Json::parse(half.out)["histogram"]["outcomes"]["10"]["probability"].get<double>(), 1.0, 1e-12);

  hhl::io::write_text_file(path("noise.json"), "{}");
  const Result noisy = cli({"qpea", "--lambda", "0.25", "--n", "2", "--noise", path("noise.json"), "--format", "json"});
  ASSERT_EQ(noisy.code, 0) << noisy.err;
  const Json h = Json::parse(noisy.out)["histogram"]["outcomes"];
  EXPECT_GE(h["01"]["probability"].get<double>(), 0.3);
  EXPECT_GE(h["11"]["probability"].get<double>(), 0.3);

  const Result sampled = cli({"qpea", "--lambda", "0.25", "--shots", "1024", "--seed", "5"});
  ASSERT_EQ(sampled.code, 0);
  EXPECT_EQ(count_lines_starting(sampled.out, "0"), 2);
}

TEST_F(CliFiles, compare_rows) {
  const Result r = cli({"compare"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["points"].size(), 2u);
  const Json& quarter = j["points"][0];
  EXPECT_EQ(quarter["lambda"], 0.25);
  EXPECT_GT(quarter["noisy"]["hybrid"]["fidelity"].get<double>(), quarter["noisy"]["original"]["fidelity"].get<double>());
  EXPECT_NEAR(quarter["theoretical"]["c_plus_sq"].get<double>(), 0.9, 1e-12);
  EXPECT_EQ(quarter["noisy"]["original"]["cnot_count"], 28);
  EXPECT_EQ(quarter["noisy"]["hybrid"]["cnot_count"], 14);
  EXPECT_NEAR(quarter["noisy"]["original"]["survival_bound"].get<double>(), 0.894, 5e-4);
  const Json& half = j["points"][1];
  EXPECT_NEAR(half["theoretical"]["c_plus_sq"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(half["theoretical"]["c_minus_sq"].get<double>(), 0.5, 1e-12);
  for (const Json& point : j["points"]) {
    for (const char* mode : {"original", "hybrid"}) {
      EXPECT_NEAR(point["noiseless"][mode]["fidelity"].get<double>(), 1.0, 1e-9);
    }
  }

  hhl::io::write_text_file(path("off.json"), R"({"t1_ns":null})");
  const Json off = Json::parse(cli({"compare", "--noise", path("off.json")}).out);
  for (const Json& point : off["points"]) {
    for (const char* mode : {"original", "hybrid"}) {
      EXPECT_NEAR(point["noisy"][mode]["fidelity"].get<double>(), 1.0, 1e-9);
    }
  }
}

TEST(cli, emit_qasm_counts) {
  const auto cx = [](std::vector<std::string> args) {
    args.insert(args.begin(), "emit-qasm");
    const Result r = cli(args);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.starts_with("OPENQASM 2.0;\n"));
    return count_lines_starting(r.out, "cx ");
  };
  EXPECT_EQ(cx({"--lambda", "0.25", "--n", "2", "--mode", "original"}), 28);
  EXPECT_EQ(cx({"--lambda", "0.25", "--n", "2", "--mode", "hybrid"}), 14);
  EXPECT_EQ(cx({"--lambda", "0.25", "--n", "2", "--mode", "qpea"}), 6);
  const Result j = cli({"emit-qasm", "--lambda", "0.25", "--mode", "qpea", "--format", "json"});
  EXPECT_EQ(Json::parse(j.out)["num_qubits"], 3);
}

TEST_F(CliFiles, byte_identical_outputs) {
  const std::vector<std::vector<std::string>> commands = {
      {"solve", "--lambda", "0.25", "--mode", "hybrid", "--shots", "1024", "--seed", "7"},
      {"solve", "--lambda", "0.475", "--n", "3"},
      {"qpea", "--lambda", "0.475", "--shots", "4096", "--seed", "2"},
      {"sweep", "--points", "15"},
      {"compare"},
      {"emit-qasm", "--lambda", "0.25", "--mode", "original"},
  };
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::vector<std::string> first = commands[i], second = commands[i];
    first.insert(first.end(), {"--out", path("a" + std::to_string(i))});
    second.insert(second.end(), {"--out", path("b" + std::to_string(i))});
    ASSERT_EQ(cli(first).code, 0);
    ASSERT_EQ(cli(second).code, 0);
    const std::string a = slurp(path("a" + std::to_string(i)));
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(path("b" + std::to_string(i)))) << commands[i][0];
  }
}

TEST_F(CliFiles, problem_file) {
  hhl::io::write_text_file(path("p.json"),
                           R"({"kind":"matrix","dim":2,"a_real":[0.5,-0.25,-0.25,0.5],"b_real":[1,0]})");
  const Result r = cli({"solve", "--problem-file", path("p.json"), "--mode", "hybrid"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["fidelity"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(cli({"solve", "--problem-file", path("p.json"), "--lambda", "0.25"}).code, hhl::kExitValidation);
}
