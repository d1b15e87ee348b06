// Copyright 2026 The Jante Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the command-line binary and checks exit codes and output files.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#ifndef JANTE_CLI_PATH
#error "JANTE_CLI_PATH must name the jante binary"
#endif

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int exit_code = -1;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("jante_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome run(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "stdout.txt";
  const std::string cmd = std::string(JANTE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(log);
  return o;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& json) {
  const fs::path p = dir / name;
  std::ofstream(p) << json;
  return p;
}

const char* kPair =
    R"({"d": 1, "M": 2, "initial": {"points": [[-1], [1]]}, "recenter": true, "seed": 42})";

TEST(Cli, ConstantsPrintsJson) {
  const fs::path dir = scratch("constants");
  const fs::path cfg = write_config(
      dir, "c.json", R"({"d": 1, "M": 2, "body": {"kind": "box", "lower": [0], "upper": [1]}})");
  const Outcome o = run("constants --config " + cfg.string(), dir);
  EXPECT_EQ(o.exit_code, 0) << o.out;
  EXPECT_NE(o.out.find("\"gamma\": 0.5"), std::string::npos);
  EXPECT_NE(o.out.find("\"n0_half\": 6"), std::string::npos);
  EXPECT_NE(o.out.find("\"drift_bound\": 0.03125"), std::string::npos);
  EXPECT_NE(o.out.find("\"c\": 0.5"), std::string::npos);
}

TEST(Cli, SimulateIsBitIdenticalOnRerun) {
  const fs::path dir = scratch("simulate");
  const fs::path cfg = write_config(dir, "pair.json", kPair);
  ASSERT_EQ(run("simulate --config " + cfg.string() + " --out " + (dir / "a").string(), dir).exit_code, 0);
  ASSERT_EQ(run("simulate --config " + cfg.string() + " --out " + (dir / "b").string(), dir).exit_code, 0);
  EXPECT_EQ(slurp(dir / "a" / "trajectory.csv"), slurp(dir / "b" / "trajectory.csv"));
  EXPECT_EQ(slurp(dir / "a" / "summary.json"), slurp(dir / "b" / "summary.json"));
  EXPECT_NE(slurp(dir / "a" / "summary.json").find("\"stop_reason\": \"TargetD\""), std::string::npos);

  ASSERT_EQ(run("simulate --config " + cfg.string() + " --seed 43 --out " + (dir / "c").string(), dir).exit_code, 0);
  EXPECT_NE(slurp(dir / "a" / "trajectory.csv"), slurp(dir / "c" / "trajectory.csv"));
}

TEST(Cli, ConfigErrorsExitWithTwo) {
  const fs::path dir = scratch("errors");
  const fs::path dup = write_config(dir, "dup.json", R"({"d": 1, "M": 2, "initial": {"points": [[0.5], [0.5]]}})");
  Outcome o = run("simulate --config " + dup.string(), dir);
  EXPECT_EQ(o.exit_code, 2);
  EXPECT_NE(o.out.find("DegenerateConfiguration"), std::string::npos);

  const fs::path typo = write_config(dir, "typo.json", R"({"d": 1, "M": 2, "n_run": 3})");
  o = run("ensemble --config " + typo.string(), dir);
  EXPECT_EQ(o.exit_code, 2);
  EXPECT_NE(o.out.find("n_run"), std::string::npos);

  EXPECT_EQ(run("simulate --config " + (dir / "missing.json").string(), dir).exit_code, 2);
  EXPECT_EQ(run("", dir).exit_code, 2);
  EXPECT_EQ(run("simulate", dir).exit_code, 2);
  EXPECT_EQ(run("launch --config x", dir).exit_code, 2);
  const fs::path pair = write_config(dir, "pair.json", kPair);
  EXPECT_EQ(run("ensemble --config " + pair.string() + " --runs 0", dir).exit_code, 2);
}

TEST(Cli, RuntimeErrorsExitWithThree) {
  const fs::path dir = scratch("runtime");
  const fs::path pair = write_config(dir, "pair.json", kPair);
  fs::path blocked = dir / "file";
  std::ofstream(blocked) << "x";
  EXPECT_EQ(run("simulate --config " + pair.string() + " --out " + (blocked / "sub").string(), dir).exit_code, 3);
}

TEST(Cli, VerifyExitCodes) {
  const fs::path dir = scratch("verify");
  const std::string base =
      R"({"d": 1, "M": 2, "initial": {"points": [[-1], [1]]}, "recenter": true, "n_runs": 2000,
          "anchor_step": 5, "stop": {"require_exodus": true, "target_D": 2e-12})";
  const fs::path good = write_config(dir, "good.json", base + "}");
  Outcome o = run("verify --config " + good.string() + " --out " + (dir / "good").string(), dir);
  EXPECT_EQ(o.exit_code, 0) << o.out;
  EXPECT_NE(o.out.find("PASS logF_drift"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "good" / "verify.json"));

  const fs::path bad = write_config(dir, "bad.json", base + R"(, "verify": {"geometric_p_min": 1.0}})");
  o = run("verify --config " + bad.string() + " --out " + (dir / "bad").string(), dir);
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_NE(o.out.find("FAIL exodus_geometric_half"), std::string::npos);
}

TEST(Cli, KeepmapHasFourClasses) {
  const fs::path dir = scratch("keepmap");
  const fs::path cfg = write_config(dir, "fig.json",
      R"({"d": 2, "M": 3, "initial": {"points": [[0, 0], [10, 0], [4, 6]]},
          "keepmap": {"lower": [-5, -7], "upper": [15, 10], "nx": 400, "ny": 400}})");
  ASSERT_EQ(run("keepmap --config " + cfg.string() + " --out " + dir.string(), dir).exit_code, 0);
  std::ifstream f(dir / "keepmap.csv");
  std::string line;
  std::getline(f, line);
  std::set<std::string> classes;
  std::size_t rows = 0;
  while (std::getline(f, line)) {
    classes.insert(line.substr(line.rfind(',') + 1));
    ++rows;
  }
  EXPECT_EQ(rows, 160000u);
  EXPECT_EQ(classes.size(), 4u);
}

TEST(Cli, EnsembleIsIndependentOfWorkers) {
  const fs::path dir = scratch("workers");
  const fs::path cfg = write_config(dir, "box.json",
      R"({"d": 2, "M": 3, "body": {"kind": "box", "lower": [0, 0], "upper": [1, 1]},
          "initial": {"random": {"lower": [0, 0], "upper": [1, 1], "seed": 4}},
          "n_runs": 200, "seed": 8})");
  ASSERT_EQ(run("ensemble --config " + cfg.string() + " --workers 1 --out " + (dir / "w1").string(), dir).exit_code, 0);
  ASSERT_EQ(run("ensemble --config " + cfg.string() + " --workers 4 --out " + (dir / "w4").string(), dir).exit_code, 0);
  const std::string a = slurp(dir / "w1" / "ensemble.csv");
  EXPECT_EQ(a, slurp(dir / "w4" / "ensemble.csv"));
  EXPECT_EQ(a.substr(0, a.find('\n')), "run,seed,tau,n_final,xi_1,xi_2,F_final,reason,ties");
}

TEST(Cli, ExodusCommand) {
  const fs::path dir = scratch("exodus");
  const fs::path cfg = write_config(dir, "pair.json", kPair);
  const Outcome o = run("exodus --config " + cfg.string() + " --runs 1000 --out " + dir.string(), dir);
  EXPECT_EQ(o.exit_code, 0) << o.out;
  EXPECT_NE(o.out.find("1000/1000"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "exodus.json"));
  EXPECT_TRUE(fs::exists(dir / "tau_histogram.csv"));
}

}  // namespace
