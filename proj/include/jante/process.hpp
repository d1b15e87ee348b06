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

#ifndef JANTE_PROCESS_HPP_
#define JANTE_PROCESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jante/configuration.hpp"
#include "jante/geometry.hpp"
#include "jante/keepset.hpp"
#include "jante/rng.hpp"

namespace jante {

inline constexpr std::int64_t kDefaultMaxAttempts = 10'000'000;

// Recentering fires once |mu| exceeds this many multiples of sqrt(F).
inline constexpr double kRecenterRatio = 1e3;

struct StepRecord {
  std::int64_t n = 0;
  Point y;             // arrival, in absolute coordinates
  Point r;             // removed point, in absolute coordinates
  Label alpha = 0;     // arrival label of the removed point
  double F_after = 0.0;
  bool near_tie = false;
  double A_after = 0.0;
  double D_after = 0.0;
  double dmin_after = 0.0;
  double d_interior_after = 0.0;  // kUnboundedDistance on FullSpace
  bool core_changed = true;       // false only for idle steps of the original process
};

// State of the Jante chain Y(n) (or Z(n) on FullSpace). Owned by one
// trajectory at a time.
struct ChainState {
  Configuration config;
  ConvexBody body;
  std::int64_t step = 0;
  Label next_label = 1;
  std::size_t original_remaining = 0;
  Point offset{};  // accumulated recentering translation
  double F = 0.0;
  double tie_tolerance = kTieTolerance;
  std::int64_t max_attempts = kDefaultMaxAttempts;
  std::int64_t near_ties = 0;
  std::int64_t proposals = 0;
  std::int64_t redraws = 0;  // tie redraws; the Keep boundary has measure zero

  static ChainState create(Configuration initial, ConvexBody body);
};

StepRecord step_jante(ChainState& state, Rng& rng);

// Same transition with the arrival supplied by the caller. Throws
// PointNotInKeep when y cannot join the configuration.
StepRecord step_jante_with_point(ChainState& state, ConstCoords y);

// Translates the configuration so mu = 0 when |mu| > kRecenterRatio sqrt(F).
// FullSpace only. Returns whether a translation happened.
bool maybe_recenter(ChainState& state);

// The original N-point process X(t): the point farthest from the mean is
// replaced by a uniform draw on a bounded body.
struct OriginalChainState {
  Configuration config;  // N points
  ConvexBody body;
  std::int64_t step = 0;
  Label next_label = 1;
  std::int64_t max_attempts = kDefaultMaxAttempts;

  static OriginalChainState create(Configuration initial, ConvexBody body);

  // X minus its farthest point from mu (smallest index on ties).
  Configuration core() const;
};

struct OriginalStepRecord {
  std::int64_t t = 0;
  Point zeta;
  Point replaced;
  Label replaced_label = 0;
  bool core_changed = false;
};

// Index of the point farthest from the mean; smallest index on ties.
std::size_t farthest_from_mean(const Configuration& x);

OriginalStepRecord step_original(OriginalChainState& state, Rng& rng);

struct StopRule {
  std::int64_t max_steps = 100'000;
  std::optional<double> target_D;
  std::optional<double> target_F;
  bool require_exodus = false;
};

enum class StopReason { kTargetD, kTargetF, kExodus, kMaxSteps };

const char* stop_reason_name(StopReason reason);

struct TrajectoryParams {
  ConvexBody body = ConvexBody::full_space(1);
  Configuration initial;
  std::uint64_t seed = 0;
  StopRule stop;
  bool recenter = false;
  bool record_steps = true;
  std::optional<std::int64_t> anchor_step;  // snapshot mu and F after this step
  std::int64_t max_attempts = kDefaultMaxAttempts;
  double tie_tolerance = kTieTolerance;
};

struct Snapshot {
  std::int64_t n = 0;
  Point mu;  // absolute coordinates
  double F = 0.0;
};

struct TrajectoryRecord {
  Configuration initial;
  std::vector<StepRecord> steps;  // empty unless record_steps
  std::vector<Label> alphas;      // alpha(1..tau), or all alphas if tau not reached
  std::optional<std::int64_t> tau;
  std::int64_t n_final = 0;
  double F_final = 0.0;
  double D_final = 0.0;
  Point xi_hat;
  StopReason stop_reason = StopReason::kMaxSteps;
  std::int64_t near_ties = 0;
  std::int64_t proposals = 0;
  std::optional<Snapshot> anchor;
  Configuration final_config;  // in the recentered frame; add offset for absolute
  Point offset;
};

TrajectoryRecord run_trajectory(const TrajectoryParams& params);

// The original process from N = M + 1 points on a bounded body. Step records
// describe original steps: y is the fresh point, alpha the label it replaced,
// and the functionals are those of the core. Exodus, targets and the limit
// estimate refer to the core, and `initial` holds the initial core.
TrajectoryRecord run_original_trajectory(const TrajectoryParams& params);

struct RemovalSequence {
  std::optional<std::int64_t> tau;
  std::vector<Label> alpha;
};

RemovalSequence removal_sequence(const TrajectoryRecord& record);

}  // namespace jante

#endif  // JANTE_PROCESS_HPP_
