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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "jante/app.hpp"
#include "jante/errors.hpp"

namespace jante::app {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

json pair_json() {
  return json{{"d", 1}, {"M", 2}, {"initial", {{"points", {{-1.0}, {1.0}}}}}, {"recenter", true}};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("jante_test_app_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

TEST(RunConfig, MinimalDefaults) {
  const RunConfig c = parse_run_config(json{{"d", 2}, {"M", 3}});
  EXPECT_EQ(c.body.kind(), BodyKind::kFullSpace);
  EXPECT_EQ(c.body.dim(), 2u);
  EXPECT_EQ(c.chain, ChainKind::kJante);
  EXPECT_EQ(c.n_runs, 1);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_FALSE(c.initial_points.has_value());
  EXPECT_EQ(code_of([&] { initial_configuration(c); }), ErrorCode::kConfig);
}

TEST(RunConfig, FullExample) {
  const json j = R"({
    "d": 2, "M": 3,
    "body": {"kind": "box", "lower": [0, 0], "upper": [1, 2]},
    "initial": {"points": [[0.1, 0.1], [0.9, 0.2], [0.5, 1.5]]},
    "chain": "jante", "seed": 18446744073709551615, "n_runs": 12,
    "stop": {"max_steps": 500, "target_D": 1e-9, "target_F": 1e-20, "require_exodus": true},
    "recenter": false, "output_dir": "somewhere", "anchor_step": 3,
    "keepmap": {"lower": [0, 0], "upper": [1, 1], "nx": 10, "ny": 20},
    "verify": {"tightness_eps": 0.25, "geometric_p_min": 0.01}
  })"_json;
  const RunConfig c = parse_run_config(j);
  EXPECT_EQ(c.body.kind(), BodyKind::kBox);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  EXPECT_EQ(c.n_runs, 12);
  EXPECT_EQ(c.stop.max_steps, 500);
  EXPECT_DOUBLE_EQ(*c.stop.target_D, 1e-9);
  EXPECT_DOUBLE_EQ(*c.stop.target_F, 1e-20);
  EXPECT_TRUE(c.stop.require_exodus);
  EXPECT_EQ(c.output_dir, "somewhere");
  EXPECT_EQ(*c.anchor_step, 3);
  EXPECT_EQ(c.keepmap.nx, 10);
  EXPECT_EQ(c.keepmap.ny, 20);
  EXPECT_DOUBLE_EQ(c.verify.tightness_eps, 0.25);
  EXPECT_EQ(initial_configuration(c).size(), 3u);
}

TEST(RunConfig, UnknownKeysAreErrors) {
  json j = pair_json();
  j["n_run"] = 3;
  EXPECT_EQ(code_of([&] { parse_run_config(j); }), ErrorCode::kConfig);
  j = pair_json();
  j["stop"] = {{"max_step", 3}};
  EXPECT_EQ(code_of([&] { parse_run_config(j); }), ErrorCode::kConfig);
  j = pair_json();
  j["body"] = {{"kind", "full_space"}, {"radius", 1.0}};
  EXPECT_EQ(code_of([&] { parse_run_config(j); }), ErrorCode::kConfig);
  j = pair_json();
  j["initial"]["pts"] = json::array();
  EXPECT_EQ(code_of([&] { parse_run_config(j); }), ErrorCode::kConfig);
  j = pair_json();
  j["keepmap"] = {{"resolution", 4}};
  EXPECT_EQ(code_of([&] { parse_run_config(j); }), ErrorCode::kConfig);
}

TEST(RunConfig, TypeAndRangeErrors) {
  for (const json& bad : {json{{"d", 1}}, json{{"d", 0}, {"M", 2}}, json{{"d", 1}, {"M", 1}},
                          json{{"d", 1.5}, {"M", 2}}, json{{"d", 1}, {"M", 2}, {"seed", -1}},
                          json{{"d", 1}, {"M", 2}, {"n_runs", 0}},
                          json{{"d", 1}, {"M", 2}, {"chain", "fast"}},
                          json{{"d", 1}, {"M", 2}, {"body", {{"kind", "torus"}}}},
                          json{{"d", 1}, {"M", 2}, {"stop", {{"max_steps", -1}}}},
                          json{{"d", 1}, {"M", 2}, {"recenter", "yes"}}, json::array()}) {
    EXPECT_EQ(code_of([&] { parse_run_config(bad); }), ErrorCode::kConfig) << bad.dump();
  }
}

TEST(RunConfig, InitialPointsAreValidated) {
  json j = pair_json();
  j["initial"]["points"] = {{-1.0}, {1.0}, {2.0}};
  EXPECT_EQ(code_of([&] { parse_run_config(j); }), ErrorCode::kConfig);
  j["initial"]["points"] = {{0.5}, {0.5}};
  EXPECT_EQ(code_of([&] { parse_run_config(j); }), ErrorCode::kDegenerateConfiguration);
  j["initial"]["points"] = {{0.5, 1.0}, {0.5, 2.0}};
  EXPECT_EQ(code_of([&] { parse_run_config(j); }), ErrorCode::kConfig);
  j = pair_json();
  j.erase("recenter");
  j["body"] = {{"kind", "box"}, {"lower", {0.0}}, {"upper", {1.0}}};
  EXPECT_EQ(code_of([&] { parse_run_config(j); }), ErrorCode::kPointOutsideBody);
}

TEST(RunConfig, ChainSpecificRules) {
  json j{{"d", 1}, {"M", 2}, {"chain", "original"}, {"initial", {{"points", {{0.1}, {0.5}, {0.9}}}}}};
  EXPECT_EQ(code_of([&] { parse_run_config(j); }), ErrorCode::kConfig);  // needs a bounded body
  j["body"] = {{"kind", "box"}, {"lower", {0.0}}, {"upper", {1.0}}};
  EXPECT_EQ(initial_configuration(parse_run_config(j)).size(), 3u);

  json s{{"d", 1}, {"M", 2}, {"chain", "scale_free"}};
  EXPECT_TRUE(parse_run_config(s).recenter);
  s["body"] = {{"kind", "box"}, {"lower", {0.0}}, {"upper", {1.0}}};
  EXPECT_EQ(code_of([&] { parse_run_config(s); }), ErrorCode::kConfig);

  json r{{"d", 1}, {"M", 2}, {"recenter", true}, {"body", {{"kind", "box"}, {"lower", {0.0}}, {"upper", {1.0}}}}};
  EXPECT_EQ(code_of([&] { parse_run_config(r); }), ErrorCode::kConfig);
}

TEST(RunConfig, PolytopeNormalsAreNormalized) {
  const json j = R"({"d": 2, "M": 2, "body": {"kind": "polytope", "interior": [0.2, 0.2],
      "facets": [{"normal": [-1, 0], "offset": 0}, {"normal": [0, -2], "offset": 0},
                 {"normal": [1, 1], "offset": 1}]}})"_json;
  const RunConfig c = parse_run_config(j);
  EXPECT_EQ(c.body.kind(), BodyKind::kPolytope);
  EXPECT_TRUE(contains(c.body, Point{0.4, 0.4}));
  EXPECT_FALSE(contains(c.body, Point{0.6, 0.6}));
  EXPECT_FALSE(contains(c.body, Point{0.1, -0.1}));
}

TEST(RunConfig, RandomInitialIsSeededAndInside) {
  const json j = R"({"d": 2, "M": 4, "body": {"kind": "ball", "center": [0, 0], "radius": 1},
      "initial": {"random": {"lower": [-1, -1], "upper": [1, 1], "seed": 5}}})"_json;
  const RunConfig c = parse_run_config(j);
  const Configuration a = initial_configuration(c), b = initial_configuration(c);
  EXPECT_EQ(a.size(), 4u);
  EXPECT_EQ(a.coords(), b.coords());
  for (const Point& p : a.points()) EXPECT_TRUE(contains(c.body, p));
  json k = j;
  k["initial"]["random"]["seed"] = 6;
  EXPECT_NE(initial_configuration(parse_run_config(k)).coords(), a.coords());
}

TEST(RunConfig, DefaultStopTarget) {
  const RunConfig c = parse_run_config(pair_json());
  const StopRule s = effective_stop(c, initial_configuration(c));
  ASSERT_TRUE(s.target_D.has_value());
  EXPECT_DOUBLE_EQ(*s.target_D, 2e-12);

  json j = pair_json();
  j["stop"] = {{"require_exodus", true}};
  const RunConfig e = parse_run_config(j);
  EXPECT_FALSE(effective_stop(e, initial_configuration(e)).target_D.has_value());
}

TEST(RunConfig, LoadsFromFile) {
  const fs::path dir = scratch("load");
  fs::create_directories(dir);
  std::ofstream(dir / "ok.json") << pair_json().dump();
  std::ofstream(dir / "bad.json") << "{\"d\": 1,";
  EXPECT_EQ(load_run_config((dir / "ok.json").string()).M, 2);
  EXPECT_EQ(code_of([&] { load_run_config((dir / "bad.json").string()); }), ErrorCode::kConfig);
  EXPECT_EQ(code_of([&] { load_run_config((dir / "none.json").string()); }), ErrorCode::kIo);
}

TEST(ParallelMap, KeepsIndexOrder) {
  const std::function<std::size_t(std::size_t)> sq = [](std::size_t i) { return i * i; };
  for (std::size_t w : {1u, 2u, 7u, 64u}) {
    const std::vector<std::size_t> v = parallel_map<std::size_t>(100, w, sq);
    ASSERT_EQ(v.size(), 100u);
    for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(v[i], i * i);
  }
  EXPECT_TRUE(parallel_map<std::size_t>(0, 4, sq).empty());
}

TEST(ParallelMap, RethrowsWorkerErrors) {
  const std::function<int(std::size_t)> boom = [](std::size_t i) {
    if (i == 37) fail(ErrorCode::kIo, "boom");
    return 0;
  };
  EXPECT_EQ(code_of([&] { parallel_map<int>(100, 3, boom); }), ErrorCode::kIo);
}

TEST(Ensemble, IndependentOfWorkerCount) {
  json j = pair_json();
  j["n_runs"] = 40;
  j["seed"] = 99;
  const RunConfig c = parse_run_config(j);
  const EnsembleResult a = run_ensemble(c, 1, false), b = run_ensemble(c, 5, false);
  EXPECT_EQ(ensemble_csv(a, 1), ensemble_csv(b, 1));
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].run, i);
    EXPECT_EQ(a.rows[i].seed, derive_seed(99, i));
  }
}

TEST(Csv, SeventeenDigitsRoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::ldexp(rng.uniform() - 0.5, static_cast<int>(rng.uniform(-300.0, 300.0)));
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(Csv, Schemas) {
  json j = pair_json();
  j["stop"] = {{"max_steps", 4}};
  const RunConfig c = parse_run_config(j);
  const TrajectoryRecord rec = run_one(c, trajectory_params(c, initial_configuration(c), 1));
  const std::string t = trajectory_csv(rec);
  EXPECT_EQ(t.substr(0, t.find('\n')), "n,y_1,alpha,F_after,near_tie");
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 5);

  json k = R"({"d": 2, "M": 3, "n_runs": 2,
      "initial": {"points": [[0, 0], [1, 0], [0, 1]]}, "recenter": true})"_json;
  const RunConfig c2 = parse_run_config(k);
  const std::string e = ensemble_csv(run_ensemble(c2, 1, false), 2);
  EXPECT_EQ(e.substr(0, e.find('\n')), "run,seed,tau,n_final,xi_1,xi_2,F_final,reason,ties");

  KeepMap m;
  m.nx = 1;
  m.ny = 1;
  m.xs = {0.5};
  m.ys = {0.25};
  m.cls = {kNotInKeep};
  EXPECT_EQ(keepmap_csv(m), "ix,iy,x,y,class\n0,0,0.5,0.25,-1\n");
}

TEST(Commands, ConstantsForUnitInterval) {
  const RunConfig c = parse_run_config(
      json{{"d", 1}, {"M", 2}, {"body", {{"kind", "box"}, {"lower", {0.0}}, {"upper", {1.0}}}}});
  const json k = json::parse(cmd_constants(c).report);
  EXPECT_DOUBLE_EQ(k["gamma"].get<double>(), 0.5);
  EXPECT_EQ(k["n0_half"].get<int>(), 6);
  EXPECT_DOUBLE_EQ(k["drift_bound"].get<double>(), 0.03125);
  EXPECT_DOUBLE_EQ(k["c"].get<double>(), 0.5);
  EXPECT_FALSE(k["c_approximate"].get<bool>());
}

TEST(Commands, SimulateIsReproducible) {
  const fs::path dir = scratch("simulate");
  RunConfig c = parse_run_config(pair_json());
  c.seed = 42;
  c.output_dir = (dir / "a").string();
  cmd_simulate(c);
  c.output_dir = (dir / "b").string();
  cmd_simulate(c);
  EXPECT_EQ(slurp(dir / "a" / "trajectory.csv"), slurp(dir / "b" / "trajectory.csv"));
  EXPECT_EQ(slurp(dir / "a" / "summary.json"), slurp(dir / "b" / "summary.json"));
  const json s = json::parse(slurp(dir / "a" / "summary.json"));
  EXPECT_EQ(s["stop_reason"], "TargetD");
  EXPECT_EQ(s["seed"].get<std::uint64_t>(), 42u);
  EXPECT_LE(s["D_final"].get<double>(), 2e-12);
  c.n_runs = 2;
  EXPECT_EQ(code_of([&] { cmd_simulate(c); }), ErrorCode::kConfig);
}

TEST(Commands, KeepmapOfTheThreePointCore) {
  const fs::path dir = scratch("keepmap");
  json j = R"({"d": 2, "M": 3, "initial": {"points": [[0, 0], [10, 0], [4, 6]]},
      "keepmap": {"lower": [-5, -7], "upper": [15, 10], "nx": 100, "ny": 80}})"_json;
  j["output_dir"] = dir.string();
  cmd_keepmap(parse_run_config(j));
  std::ifstream f(dir / "keepmap.csv");
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "ix,iy,x,y,class");
  std::set<std::string> classes;
  int rows = 0;
  while (std::getline(f, line)) {
    classes.insert(line.substr(line.rfind(',') + 1));
    ++rows;
  }
  EXPECT_EQ(rows, 8000);
  EXPECT_EQ(classes, (std::set<std::string>{"-1", "0", "1", "2"}));
}

TEST(Commands, VerifyPassesAndFails) {
  const fs::path dir = scratch("verify");
  json j = pair_json();
  j["n_runs"] = 2000;
  j["seed"] = 1;
  j["anchor_step"] = 5;
  j["stop"] = {{"require_exodus", true}, {"target_D", 2e-12}};
  j["output_dir"] = dir.string();
  const CommandResult ok = cmd_verify(parse_run_config(j), 1);
  EXPECT_FALSE(ok.verify_failed) << ok.report;
  const json v = json::parse(slurp(dir / "verify.json"));
  EXPECT_TRUE(v["pass"].get<bool>());
  std::set<std::string> names;
  for (const json& c : v["checks"]) names.insert(c["name"].get<std::string>());
  EXPECT_EQ(names, (std::set<std::string>{"logF_drift", "decrease_probability", "no_exact_collisions",
                                          "exodus_finite", "exodus_geometric_half", "tightness"}));
  for (const char* f : {"ensemble.csv", "ensemble_summary.json", "atom_ladder.csv",
                        "tau_histogram.csv", "drift.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;

  // A p-value threshold of 1 cannot be met.
  j["verify"] = {{"geometric_p_min", 1.0}};
  const CommandResult bad = cmd_verify(parse_run_config(j), 1);
  EXPECT_TRUE(bad.verify_failed);
  EXPECT_NE(bad.report.find("FAIL exodus_geometric_half"), std::string::npos);
}

TEST(Commands, ExodusWritesHistogram) {
  const fs::path dir = scratch("exodus");
  json j = pair_json();
  j["n_runs"] = 500;
  j["output_dir"] = dir.string();
  cmd_exodus(parse_run_config(j), 2);
  const json e = json::parse(slurp(dir / "exodus.json"));
  EXPECT_TRUE(e["all_finite"].get<bool>());
  EXPECT_TRUE(e.contains("m2_geometric"));
  const std::string h = slurp(dir / "tau_histogram.csv");
  EXPECT_EQ(h.substr(0, h.find('\n')), "tau,count,geometric_expected");
}

TEST(Commands, OriginalEnsembleRuns) {
  const fs::path dir = scratch("original");
  json j = R"({"d": 1, "M": 2, "chain": "original", "n_runs": 20,
      "body": {"kind": "box", "lower": [0], "upper": [1]},
      "initial": {"points": [[0.02], [0.5], [0.97]]},
      "stop": {"target_D": 1e-6}})"_json;
  j["output_dir"] = dir.string();
  cmd_ensemble(parse_run_config(j), 2);
  const json s = json::parse(slurp(dir / "ensemble_summary.json"));
  EXPECT_EQ(s["chain"], "original");
  EXPECT_EQ(s["n_runs"], 20);
}

}  // namespace
}  // namespace jante::app
