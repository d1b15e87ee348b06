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

#ifndef JANTE_APP_HPP_
#define JANTE_APP_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "jante/analysis.hpp"
#include "jante/configuration.hpp"
#include "jante/geometry.hpp"
#include "jante/process.hpp"

namespace jante::app {

enum class ChainKind { kJante, kOriginal, kScaleFree };

const char* chain_kind_name(ChainKind kind);

struct RandomInitial {
  Box box;
  std::uint64_t seed = 0;
};

struct KeepmapSettings {
  std::optional<Box> bbox;  // default: square around the outer Keep ball
  int nx = 400;
  int ny = 400;
};

struct VerifySettings {
  double tightness_eps = 0.5;
  double geometric_p_min = 1e-3;
};

// One experiment definition. `initial_points` or `random_initial` holds the
// starting configuration; commands that need one fail with ConfigError when
// neither is present.
struct RunConfig {
  int d = 1;
  int M = 2;
  ConvexBody body = ConvexBody::full_space(1);
  std::optional<std::vector<Point>> initial_points;
  std::optional<RandomInitial> random_initial;
  ChainKind chain = ChainKind::kJante;
  std::uint64_t seed = 0;
  std::int64_t n_runs = 1;
  StopRule stop;
  bool recenter = false;
  std::string output_dir = ".";
  std::optional<std::int64_t> anchor_step;
  KeepmapSettings keepmap;
  VerifySettings verify;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Points in the starting state: M for the Jante chains, M + 1 for the
// original process.
Configuration initial_configuration(const RunConfig& cfg);

// Stop rule actually used: with no target and no exodus requirement the
// run stops at D <= 1e-12 D(initial).
StopRule effective_stop(const RunConfig& cfg, const Configuration& initial);

TrajectoryParams trajectory_params(const RunConfig& cfg, const Configuration& initial,
                                   std::uint64_t seed);

TrajectoryRecord run_one(const RunConfig& cfg, const TrajectoryParams& params);

std::size_t default_workers();

// Calls fn(i) for i in [0, n) on up to `workers` threads and returns the
// results in index order. The first exception raised is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, std::size_t workers,
                            const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n && !stop; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  const std::size_t k = std::max<std::size_t>(1, std::min(workers, n));
  if (k == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(k);
    for (std::size_t t = 0; t < k; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct RunRow {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> tau;
  std::int64_t n_final = 0;
  Point xi_hat;
  double F_final = 0.0;
  StopReason reason = StopReason::kMaxSteps;
  std::int64_t near_ties = 0;
  std::optional<Snapshot> anchor;
  std::vector<Transition> transitions;
};

struct EnsembleResult {
  Configuration initial;
  std::vector<RunRow> rows;  // sorted by run index
};

EnsembleResult run_ensemble(const RunConfig& cfg, std::size_t workers, bool keep_transitions);

std::string format_double(double v);  // 17 significant digits

std::string trajectory_csv(const TrajectoryRecord& rec);
nlohmann::json trajectory_summary(const TrajectoryRecord& rec, std::uint64_t seed);
std::string ensemble_csv(const EnsembleResult& e, std::size_t d);
std::string keepmap_csv(const KeepMap& m);
std::string atom_ladder_csv(const AtomScanReport& r);
std::string tau_histogram_csv(const ExodusReport& r);

nlohmann::json to_json(const TheoryConstants& k);
nlohmann::json to_json(const DriftReport& r);
nlohmann::json to_json(const DecreaseReport& r);
nlohmann::json to_json(const ExodusReport& r);
nlohmann::json to_json(const AtomScanReport& r);
nlohmann::json to_json(const TightnessReport& r);

// Theory constants for the configured body; c = b(r0) / (V(d) r0^d) at the
// default r0.
nlohmann::json constants_report(const RunConfig& cfg);

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
  double se = 0.0;
};

struct CommandOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> runs;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> workers;
};

void apply_overrides(RunConfig& cfg, const CommandOverrides& o);

struct CommandResult {
  bool verify_failed = false;
  std::string report;  // human-readable text printed by the CLI
};

CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_ensemble(const RunConfig& cfg, std::size_t workers);
CommandResult cmd_verify(const RunConfig& cfg, std::size_t workers);
CommandResult cmd_keepmap(const RunConfig& cfg);
CommandResult cmd_constants(const RunConfig& cfg);
CommandResult cmd_exodus(const RunConfig& cfg, std::size_t workers);

}  // namespace jante::app

#endif  // JANTE_APP_HPP_
