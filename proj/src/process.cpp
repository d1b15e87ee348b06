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

#include "jante/process.hpp"

#include <cmath>
#include <string>

#include "jante/errors.hpp"

namespace jante {
namespace {

std::size_t count_originals(const Configuration& x) {
  std::size_t n = 0;
  for (Label l : x.labels())
    if (l <= 0) ++n;
  return n;
}

Point absolute(ConstCoords p, const Point& offset) {
  Point out(p);
  for (std::size_t k = 0; k < out.dim(); ++k) out[k] += offset[k];
  return out;
}

void check_inside(const Configuration& x, const ConvexBody& body) {
  require(x.dim() == body.dim(), ErrorCode::kDimensionMismatch,
          "configuration dimension does not match body");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!body.contains_unchecked(x.point(i)))
      fail(ErrorCode::kPointOutsideBody,
           "initial point " + std::to_string(i) + " lies outside " + body.describe());
}

// Applies the replacement chosen by `removal` and fills the record.
StepRecord apply_step(ChainState& state, ConstCoords y, const RemovalOutcome& removal) {
  const std::size_t j = removal.index;
  StepRecord rec;
  rec.n = state.step + 1;
  rec.y = absolute(y, state.offset);
  rec.r = absolute(state.config.point(j), state.offset);
  rec.alpha = state.config.label(j);
  rec.near_tie = removal.near_tie;

  state.config.replace(j, y, state.next_label);
  state.step += 1;
  state.next_label += 1;
  if (rec.alpha <= 0) state.original_remaining -= 1;
  if (removal.near_tie) state.near_ties += 1;

  const Functionals f = functionals(state.config);
  if (!(f.F < state.F) && !removal.near_tie)
    fail(ErrorCode::kInvariantViolated,
         "F did not decrease at step " + std::to_string(rec.n));
  state.F = f.F;
  rec.F_after = f.F;
  rec.A_after = f.A;
  rec.D_after = f.D;
  rec.dmin_after = f.d_min;
  rec.d_interior_after = distance_to_boundary(state.config, state.body).d_b_interior;
  return rec;
}

}  // namespace

ChainState ChainState::create(Configuration initial, ConvexBody body) {
  check_inside(initial, body);
  ChainState s{.config = std::move(initial), .body = std::move(body)};
  s.original_remaining = count_originals(s.config);
  s.offset = Point(s.config.dim());
  s.F = moment_of_inertia(s.config);
  Label top = 0;
  for (Label l : s.config.labels()) top = std::max(top, l);
  s.next_label = top + 1;
  return s;
}

StepRecord step_jante(ChainState& state, Rng& rng) {
  const KeepRegion region(state.config, state.body);
  Point y(state.config.dim());
  for (;;) {
    state.proposals += region.sample_into(rng, state.max_attempts, y.coords());
    const RemovalOutcome removal = removal_choice(state.config, y, state.tie_tolerance);
    if (!removal.incoming_extreme()) return apply_step(state, y, removal);
    // Only reachable when rounding splits a tie on the Keep boundary.
    state.redraws += 1;
  }
}

StepRecord step_jante_with_point(ChainState& state, ConstCoords y) {
  require(y.size() == state.config.dim(), ErrorCode::kDimensionMismatch,
          "arrival dimension does not match configuration");
  require(KeepRegion(state.config, state.body).contains(y), ErrorCode::kPointNotInKeep,
          "arrival is not in Keep of the current configuration");
  const RemovalOutcome removal = removal_choice(state.config, y, state.tie_tolerance);
  require(!removal.incoming_extreme(), ErrorCode::kPointNotInKeep,
          "arrival ties with the farthest point and would not join");
  return apply_step(state, y, removal);
}

bool maybe_recenter(ChainState& state) {
  if (state.body.kind() != BodyKind::kFullSpace) return false;
  const Functionals f = functionals(state.config);
  if (!(norm(f.mu) > kRecenterRatio * std::sqrt(f.F))) return false;
  Point shift(f.mu.dim());
  for (std::size_t k = 0; k < shift.dim(); ++k) {
    shift[k] = -f.mu[k];
    state.offset[k] += f.mu[k];
  }
  state.config.translate(shift);
  return true;
}

OriginalChainState OriginalChainState::create(Configuration initial, ConvexBody body) {
  require(body.is_bounded(), ErrorCode::kUnboundedBody,
          "the original process needs a bounded body");
  require(initial.size() >= 3, ErrorCode::kInvalidArgument,
          "the original process needs N >= 3 points");
  check_inside(initial, body);
  OriginalChainState s{.config = std::move(initial), .body = std::move(body)};
  Label top = 0;
  for (Label l : s.config.labels()) top = std::max(top, l);
  s.next_label = top + 1;
  return s;
}

std::size_t farthest_from_mean(const Configuration& x) {
  const std::size_t d = x.dim(), m = x.size();
  const ConstCoords a = x.point(0);
  double buf[16] = {};
  std::vector<double> heap;
  std::span<double> mu(buf, d);
  if (d > 16) {
    heap.assign(d, 0.0);
    mu = heap;
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < d; ++k) mu[k] += x.point(i)[k] - a[k];
  for (double& v : mu) v /= static_cast<double>(m);
  std::size_t best = 0;
  double best_r = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    double r = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double t = (x.point(i)[k] - a[k]) - mu[k];
      r += t * t;
    }
    if (r > best_r) {
      best_r = r;
      best = i;
    }
  }
  return best;
}

Configuration OriginalChainState::core() const {
  const std::size_t skip = farthest_from_mean(config);
  std::vector<Point> pts;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (i == skip) continue;
    pts.push_back(config.point_copy(i));
    labels.push_back(config.label(i));
  }
  return Configuration::create(pts, labels, 0.0);
}

OriginalStepRecord step_original(OriginalChainState& state, Rng& rng) {
  const std::size_t j = farthest_from_mean(state.config);
  OriginalStepRecord rec;
  rec.t = state.step + 1;
  rec.replaced = state.config.point_copy(j);
  rec.replaced_label = state.config.label(j);
  do {
    rec.zeta = sample_uniform_body(rng, state.body, state.max_attempts);
  } while (state.config.has_point(rec.zeta));
  state.config.replace(j, rec.zeta, state.next_label);
  state.next_label += 1;
  state.step += 1;
  // The core moves unless the new point is itself the farthest one.
  rec.core_changed = farthest_from_mean(state.config) != j;
  return rec;
}

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::kTargetD: return "TargetD";
    case StopReason::kTargetF: return "TargetF";
    case StopReason::kExodus: return "Exodus";
    case StopReason::kMaxSteps: return "MaxSteps";
  }
  return "Unknown";
}

namespace {

// Evaluates a StopRule against the current chain values.
class StopCheck {
 public:
  explicit StopCheck(const StopRule& rule)
      : rule_(rule),
        has_target_(rule.target_D.has_value() || rule.target_F.has_value()),
        has_goal_(has_target_ || rule.require_exodus) {}

  bool done(double D, double F, bool exodus, StopReason& why) const {
    bool target_met = !has_target_;
    if (rule_.target_D && D <= *rule_.target_D) {
      target_met = true;
      why = StopReason::kTargetD;
    } else if (rule_.target_F && F <= *rule_.target_F) {
      target_met = true;
      why = StopReason::kTargetF;
    }
    if (!has_goal_ || !target_met || (rule_.require_exodus && !exodus)) return false;
    if (!has_target_) why = StopReason::kExodus;
    return true;
  }

 private:
  const StopRule& rule_;
  bool has_target_;
  bool has_goal_;
};

void check_params(const TrajectoryParams& params) {
  require(params.stop.max_steps >= 0, ErrorCode::kInvalidArgument,
          "max_steps must be non-negative");
  require(params.max_attempts > 0, ErrorCode::kInvalidArgument,
          "max_attempts must be positive");
}

}  // namespace

TrajectoryRecord run_trajectory(const TrajectoryParams& params) {
  check_params(params);
  require(!params.recenter || params.body.kind() == BodyKind::kFullSpace,
          ErrorCode::kInvalidArgument, "recentering is only lawful on FullSpace");

  ChainState state = ChainState::create(params.initial, params.body);
  state.max_attempts = params.max_attempts;
  state.tie_tolerance = params.tie_tolerance;
  Rng rng(params.seed);

  TrajectoryRecord rec;
  rec.initial = params.initial;
  const StopCheck stop(params.stop);
  double D = functionals(state.config).D;

  StopReason why = StopReason::kMaxSteps;
  bool done = stop.done(D, state.F, false, why);
  while (!done && state.step < params.stop.max_steps) {
    StepRecord s = step_jante(state, rng);
    if (!rec.tau) {
      rec.alphas.push_back(s.alpha);
      if (state.original_remaining == 0) rec.tau = s.n;
    }
    D = s.D_after;
    if (params.anchor_step && *params.anchor_step == s.n) {
      const Functionals f = functionals(state.config);
      rec.anchor = Snapshot{s.n, absolute(f.mu, state.offset), f.F};
    }
    if (params.record_steps) rec.steps.push_back(std::move(s));
    if (params.recenter) maybe_recenter(state);
    done = stop.done(D, state.F, rec.tau.has_value(), why);
  }
  if (!done) why = StopReason::kMaxSteps;

  const Functionals f = functionals(state.config);
  rec.n_final = state.step;
  rec.F_final = f.F;
  rec.D_final = f.D;
  rec.xi_hat = absolute(f.mu, state.offset);
  rec.stop_reason = why;
  rec.near_ties = state.near_ties;
  rec.proposals = state.proposals;
  rec.final_config = state.config;
  rec.offset = state.offset;
  return rec;
}

TrajectoryRecord run_original_trajectory(const TrajectoryParams& params) {
  check_params(params);
  require(!params.recenter, ErrorCode::kInvalidArgument,
          "the original process runs on a bounded body and is never recentered");
  OriginalChainState state = OriginalChainState::create(params.initial, params.body);
  state.max_attempts = params.max_attempts;
  Rng rng(params.seed);

  TrajectoryRecord rec;
  Configuration core = state.core();
  rec.initial = core;
  Functionals f = functionals(core);
  const StopCheck stop(params.stop);
  std::size_t originals = count_originals(state.config);

  StopReason why = StopReason::kMaxSteps;
  bool done = stop.done(f.D, f.F, false, why);
  while (!done && state.step < params.stop.max_steps) {
    const OriginalStepRecord o = step_original(state, rng);
    if (o.replaced_label <= 0) originals -= 1;
    core = state.core();
    const Functionals next = functionals(core);
    if (o.core_changed ? !(next.F < f.F) : next.F != f.F)
      fail(ErrorCode::kInvariantViolated,
           "core moment of inertia misbehaved at step " + std::to_string(o.t));
    f = next;

    StepRecord s;
    s.n = o.t;
    s.y = o.zeta;
    s.r = o.replaced;
    s.alpha = o.replaced_label;
    s.F_after = f.F;
    s.A_after = f.A;
    s.D_after = f.D;
    s.dmin_after = f.d_min;
    s.d_interior_after = distance_to_boundary(core, state.body).d_b_interior;
    s.core_changed = o.core_changed;
    if (!rec.tau) {
      rec.alphas.push_back(s.alpha);
      if (originals == 0) rec.tau = s.n;
    }
    if (params.anchor_step && *params.anchor_step == s.n)
      rec.anchor = Snapshot{s.n, f.mu, f.F};
    if (params.record_steps) rec.steps.push_back(std::move(s));
    done = stop.done(f.D, f.F, rec.tau.has_value(), why);
  }
  if (!done) why = StopReason::kMaxSteps;

  rec.n_final = state.step;
  rec.F_final = f.F;
  rec.D_final = f.D;
  rec.xi_hat = f.mu;
  rec.stop_reason = why;
  rec.final_config = core;
  rec.offset = Point(core.dim());
  return rec;
}

RemovalSequence removal_sequence(const TrajectoryRecord& record) {
  return {record.tau, record.alphas};
}

}  // namespace jante
