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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "jante/errors.hpp"
#include "jante/keepset.hpp"
#include "jante/process.hpp"
#include "jante/stats.hpp"

namespace jante {
namespace {

Configuration line(std::initializer_list<double> xs) {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back(Point{x});
  return Configuration::create(pts);
}

ChainState pair_state() { return ChainState::create(line({-1.0, 1.0}), ConvexBody::full_space(1)); }

TrajectoryParams params(Configuration initial, ConvexBody body, std::uint64_t seed) {
  TrajectoryParams p;
  p.initial = std::move(initial);
  p.body = std::move(body);
  p.seed = seed;
  return p;
}

TEST(StepJante, PairRemovesEachEndpointHalfTheTime) {
  Rng rng(1);
  const int n = 100000;
  int minus = 0;
  for (int i = 0; i < n; ++i) {
    ChainState s = pair_state();
    const StepRecord r = step_jante(s, rng);
    ASSERT_EQ(s.original_remaining, 1u);
    ASSERT_TRUE(r.alpha == -1 || r.alpha == 0);
    if (r.alpha == -1) ++minus;
  }
  EXPECT_NEAR(static_cast<double>(minus) / n, 0.5, 0.005);
}

TEST(StepJante, MomentDecreasesEveryStep) {
  Rng rng(2);
  for (int run = 0; run < 200; ++run) {
    const ConvexBody body = run % 2 ? ConvexBody::box(Point{0.0, 0.0}, Point{1.0, 1.0})
                                    : ConvexBody::full_space(2);
    ChainState s = ChainState::create(
        Configuration::create({Point{0.1, 0.2}, Point{0.8, 0.3}, Point{0.5, 0.9}}), body);
    double f = s.F;
    for (int k = 0; k < 40; ++k) {
      const StepRecord r = step_jante(s, rng);
      ASSERT_LT(r.F_after, f);
      ASSERT_EQ(r.F_after, moment_of_inertia(s.config));
      ASSERT_TRUE(contains(body, r.y));
      f = r.F_after;
    }
  }
}

TEST(StepJante, ReplayIsDeterministic) {
  auto run = [](std::uint64_t seed) {
    TrajectoryParams p = params(line({0.1, 0.5, 0.7}), ConvexBody::box(Point{0.0}, Point{1.0}), seed);
    p.stop.max_steps = 50;
    return run_trajectory(p);
  };
  const TrajectoryRecord a = run(42), b = run(42), c = run(43);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    EXPECT_EQ(a.steps[i].y, b.steps[i].y);
    EXPECT_EQ(a.steps[i].alpha, b.steps[i].alpha);
    EXPECT_EQ(a.steps[i].F_after, b.steps[i].F_after);
  }
  EXPECT_NE(a.steps[0].y, c.steps[0].y);
}

TEST(StepJanteWithPoint, TwoStepRegionReplays) {
  ChainState s = pair_state();
  const StepRecord a = step_jante_with_point(s, Point{0.5});
  EXPECT_EQ(a.alpha, -1);
  EXPECT_EQ(a.r[0], -1.0);
  const StepRecord b = step_jante_with_point(s, Point{0.6});
  EXPECT_EQ(b.alpha, 0);
  EXPECT_EQ(s.original_remaining, 0u);

  ChainState t = pair_state();
  EXPECT_EQ(step_jante_with_point(t, Point{2.0}).alpha, -1);
  EXPECT_EQ(step_jante_with_point(t, Point{2.9}).alpha, 0);
  EXPECT_EQ(t.original_remaining, 0u);
}

TEST(StepJanteWithPoint, RejectsPointsOutsideKeep) {
  ChainState s = pair_state();
  try {
    step_jante_with_point(s, Point{3.2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPointNotInKeep);
  }
  EXPECT_THROW(step_jante_with_point(s, Point{1.0}), Error);
  EXPECT_THROW(step_jante_with_point(s, Point{3.0}), Error);  // exact tie with -1
  EXPECT_EQ(s.step, 0);
}

TEST(RunTrajectory, PairShrinksToTarget) {
  TrajectoryParams p = params(line({-1.0, 1.0}), ConvexBody::full_space(1), 7);
  p.stop.target_D = 1e-9;
  std::vector<double> steps;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    p.seed = seed;
    const TrajectoryRecord r = run_trajectory(p);
    ASSERT_EQ(r.stop_reason, StopReason::kTargetD);
    ASSERT_LE(r.D_final, 1e-9);
    steps.push_back(static_cast<double>(r.n_final));
  }
  // Keep({-1, 1}) = (-3, 3) and an arrival z in (0, 3) removes -1, so
  // E log(D'/D) = (2 log 2 - 3) / 3 - log 2 exactly. Wald's identity then
  // bounds the mean hitting time of D <= 1e-9 below by log(2e9) / |E log|.
  // Above, E[F'/F] <= 1/2 and Jensen give at most log2(4e18) ~ 62 on average.
  const double log_drift = (2.0 * std::log(2.0) - 3.0) / 3.0 - std::log(2.0);
  const MeanSe m = mean_se(steps);
  EXPECT_GT(m.mean, std::log(2e9) / -log_drift - 3.0 * m.se);
  EXPECT_LT(m.mean, 62.0 + 3.0 * m.se);
}

TEST(RunTrajectory, StopRuleVariants) {
  TrajectoryParams p = params(line({-1.0, 1.0}), ConvexBody::full_space(1), 3);
  p.stop.max_steps = 17;
  TrajectoryRecord r = run_trajectory(p);
  EXPECT_EQ(r.stop_reason, StopReason::kMaxSteps);
  EXPECT_EQ(r.n_final, 17);

  p.stop.target_F = 1e-6;
  p.stop.max_steps = 100000;
  r = run_trajectory(p);
  EXPECT_EQ(r.stop_reason, StopReason::kTargetF);
  EXPECT_LE(r.F_final, 1e-6);

  p.stop.target_F.reset();
  p.stop.require_exodus = true;
  r = run_trajectory(p);
  EXPECT_EQ(r.stop_reason, StopReason::kExodus);
  ASSERT_TRUE(r.tau.has_value());
  EXPECT_EQ(*r.tau, r.n_final);

  // Targets and exodus together: both must hold.
  p.stop.target_D = 10.0;
  r = run_trajectory(p);
  EXPECT_EQ(r.stop_reason, StopReason::kTargetD);
  EXPECT_EQ(*r.tau, r.n_final);
}

TEST(RunTrajectory, PairExodusMeanIsThree) {
  TrajectoryParams p = params(line({-1.0, 1.0}), ConvexBody::full_space(1), 0);
  p.stop.require_exodus = true;
  p.record_steps = false;
  std::vector<double> taus;
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    p.seed = derive_seed(99, seed);
    taus.push_back(static_cast<double>(*run_trajectory(p).tau));
  }
  const MeanSe m = mean_se(taus);
  EXPECT_NEAR(m.mean, 3.0, 4.0 * m.se);
}

TEST(RunTrajectory, ExodusAlwaysHappens) {
  for (int d = 1; d <= 2; ++d)
    for (int m = 2; m <= 4; ++m) {
      std::vector<Point> pts;
      for (int i = 0; i < m; ++i) {
        Point q(static_cast<std::size_t>(d));
        q[0] = i;
        if (d == 2) q[1] = i * i;
        pts.push_back(q);
      }
      TrajectoryParams p = params(Configuration::create(pts),
                                  ConvexBody::full_space(static_cast<std::size_t>(d)), 0);
      p.stop.require_exodus = true;
      p.stop.max_steps = 100000;
      p.record_steps = false;
      for (std::uint64_t seed = 0; seed < 500; ++seed) {
        p.seed = seed;
        const TrajectoryRecord r = run_trajectory(p);
        ASSERT_TRUE(r.tau.has_value());
        ASSERT_LE(r.near_ties, 0);
      }
    }
}

TEST(RemovalSequence, LabelsAreDistinctAndCausal) {
  TrajectoryParams p = params(line({0.0, 0.3, 1.0}), ConvexBody::box(Point{0.0}, Point{1.0}), 0);
  p.stop.max_steps = 200;
  p.stop.require_exodus = true;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    p.seed = seed;
    const TrajectoryRecord r = run_trajectory(p);
    const RemovalSequence seq = removal_sequence(r);
    ASSERT_TRUE(seq.tau.has_value());
    ASSERT_EQ(seq.alpha.size(), static_cast<std::size_t>(*seq.tau));
    ASSERT_LE(seq.alpha.front(), 0);
    std::set<Label> seen(seq.alpha.begin(), seq.alpha.end());
    ASSERT_EQ(seen.size(), seq.alpha.size());
    for (std::size_t n = 1; n <= seq.alpha.size(); ++n)
      ASSERT_LE(seq.alpha[n - 1], static_cast<Label>(n) - 1);
    ASSERT_EQ(seq.alpha.back() <= 0, true);
  }
}

TEST(RemovalSequence, NotReachedWhenStoppedEarly) {
  TrajectoryParams p = params(line({0.0, 0.3, 1.0}), ConvexBody::full_space(1), 0);
  p.stop.max_steps = 1;
  const RemovalSequence seq = removal_sequence(run_trajectory(p));
  EXPECT_FALSE(seq.tau.has_value());
  EXPECT_EQ(seq.alpha.size(), 1u);
}

TEST(ScaleFree, ReplayedArrivalsAreEquivariant) {
  Rng rng(5);
  const Configuration x = Configuration::create({Point{0.0, 0.0}, Point{1.0, 0.2}, Point{0.3, 0.8}});
  ChainState a = ChainState::create(x, ConvexBody::full_space(2));
  std::vector<Point> arrivals;
  for (int i = 0; i < 60; ++i) arrivals.push_back(step_jante(a, rng).y);

  const double s = 3.7;
  const Point v{-12.5, 4.25};
  Configuration y = x;
  y.scale(s);
  y.translate(v);
  ChainState b = ChainState::create(y, ConvexBody::full_space(2));
  ChainState a2 = ChainState::create(x, ConvexBody::full_space(2));
  for (const Point& z : arrivals) {
    step_jante_with_point(a2, z);
    const Point w{s * z[0] + v[0], s * z[1] + v[1]};
    step_jante_with_point(b, w);
    const double scale = std::sqrt(b.F);
    for (std::size_t i = 0; i < 3; ++i) {
      ASSERT_EQ(a2.config.label(i), b.config.label(i));
      for (std::size_t k = 0; k < 2; ++k)
        ASSERT_NEAR(b.config.point(i)[k], s * a2.config.point(i)[k] + v[k],
                    1e-12 * std::max(1.0, std::abs(v[k])) + 1e-9 * scale);
    }
  }
}

TEST(ScaleFree, RecenteringKeepsTheLimit) {
  TrajectoryParams p = params(line({0.0, 1.0, 2.5}), ConvexBody::full_space(1), 11);
  p.stop.target_D = 1e-9;
  p.record_steps = false;
  const TrajectoryRecord plain = run_trajectory(p);
  p.recenter = true;
  const TrajectoryRecord centered = run_trajectory(p);
  EXPECT_NE(centered.offset[0], 0.0);
  EXPECT_NEAR(centered.xi_hat[0], plain.xi_hat[0], 1e-6);
  p.body = ConvexBody::box(Point{-1.0}, Point{3.0});
  EXPECT_THROW(run_trajectory(p), Error);
}

TEST(ScaleFree, NearTiesAreRare) {
  TrajectoryParams p = params(line({-1.0, 0.2, 1.0}), ConvexBody::full_space(1), 0);
  p.stop.target_D = 1e-12 * 2.0;
  p.recenter = true;
  p.record_steps = false;
  std::int64_t steps = 0, ties = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    p.seed = seed;
    const TrajectoryRecord r = run_trajectory(p);
    steps += r.n_final;
    ties += r.near_ties;
  }
  EXPECT_LT(static_cast<double>(ties) / static_cast<double>(steps), 1e-6);
}

TEST(StepOriginal, CoreHasOneFewerPoint) {
  Rng rng(6);
  OriginalChainState s = OriginalChainState::create(line({0.1, 0.5, 0.8}),
                                                    ConvexBody::box(Point{0.0}, Point{1.0}));
  for (int i = 0; i < 100; ++i) {
    const OriginalStepRecord r = step_original(s, rng);
    EXPECT_EQ(s.core().size(), 2u);
    EXPECT_TRUE(contains(s.body, r.zeta));
  }
  EXPECT_THROW(OriginalChainState::create(line({0.1, 0.5, 0.8}), ConvexBody::full_space(1)),
               Error);
}

TEST(StepOriginal, IdleFractionMatchesKeepVolume) {
  Rng rng(7);
  const ConvexBody body = ConvexBody::box(Point{0.0, 0.0}, Point{1.0, 1.0});
  const OriginalChainState start = OriginalChainState::create(
      Configuration::create({Point{0.3, 0.3}, Point{0.5, 0.35}, Point{0.4, 0.5}, Point{0.9, 0.9}}),
      body);
  const int n = 100000;
  int changed = 0;
  for (int i = 0; i < n; ++i) {
    OriginalChainState s = start;
    if (step_original(s, rng).core_changed) ++changed;
  }
  const McEstimate keep = keep_volume(rng, start.core(), body, 400000);
  const double p = static_cast<double>(changed) / n;
  const double se = std::hypot(std::sqrt(p * (1 - p) / n), keep.se);
  EXPECT_NEAR(p, keep.value, 4.0 * se);
}

TEST(StepOriginal, TimeChangedCoreMatchesJanteChain) {
  const ConvexBody body = ConvexBody::box(Point{0.0}, Point{1.0});
  const Configuration x0 = line({0.15, 0.4, 0.95});
  OriginalChainState proto = OriginalChainState::create(x0, body);
  const Configuration y0 = proto.core();
  std::vector<double> direct, changed;
  for (std::uint64_t run = 0; run < 5000; ++run) {
    Rng rng(derive_seed(1, run));
    ChainState s = ChainState::create(y0, body);
    for (int k = 0; k < 5; ++k) step_jante(s, rng);
    direct.push_back(s.F);

    Rng rng2(derive_seed(2, run));
    OriginalChainState o = proto;
    int moves = 0;
    while (moves < 5) {
      if (step_original(o, rng2).core_changed) ++moves;
    }
    changed.push_back(moment_of_inertia(o.core()));
  }
  EXPECT_GT(ks_two_sample(direct, changed).p_value, 0.001);
}

TEST(RunOriginal, RecordsIdleSteps) {
  TrajectoryParams p = params(line({0.15, 0.4, 0.95}), ConvexBody::box(Point{0.0}, Point{1.0}), 3);
  p.stop.max_steps = 300;
  const TrajectoryRecord r = run_original_trajectory(p);
  EXPECT_EQ(r.steps.size(), 300u);
  EXPECT_EQ(r.initial.size(), 2u);
  const auto idle = std::count_if(r.steps.begin(), r.steps.end(),
                                  [](const StepRecord& s) { return !s.core_changed; });
  EXPECT_GT(idle, 0);
  double f = functionals(r.initial).F;
  for (const StepRecord& s : r.steps) {
    if (s.core_changed) {
      EXPECT_LT(s.F_after, f);
    } else {
      EXPECT_EQ(s.F_after, f);
    }
    f = s.F_after;
  }
}

}  // namespace
}  // namespace jante
