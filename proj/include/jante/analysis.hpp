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

#ifndef JANTE_ANALYSIS_HPP_
#define JANTE_ANALYSIS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jante/configuration.hpp"
#include "jante/constants.hpp"
#include "jante/geometry.hpp"
#include "jante/process.hpp"
#include "jante/stats.hpp"

namespace jante {

// ---------------------------------------------------------------------------
// Drift of Lyapunov functionals along recorded trajectories.

enum class DriftFunctional { kLogF, kH, kG };

const char* drift_functional_name(DriftFunctional f);

// Which transitions n -> n+1 enter the average, judged at time n.
struct DriftConditioning {
  std::optional<double> h_min;  // h(Y(n)) >= h_min
  std::optional<double> A_max;  // A(Y(n)) <= A_max
  std::optional<double> g_min;  // g(Y(n)) >= g_min
};

struct DriftReport {
  DriftFunctional functional = DriftFunctional::kLogF;
  std::int64_t n_increments = 0;
  double conditional_mean = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;        // NaN when descriptive
  bool pass = false;         // conditional_mean <= bound + 3 se
  bool descriptive = false;  // no bound to test against
  bool empty = false;        // conditioning set had no transitions
};

// One transition of a trajectory: functionals before and after a step.
struct Transition {
  double F_before = 0.0, F_after = 0.0;
  double h_before = 0.0, h_after = 0.0;
  double g_before = 0.0, g_after = 0.0;
  double A_before = 0.0;
};

// Transitions of recorded trajectories (records need record_steps). Idle
// steps of the original process are skipped, which yields the time-changed
// chain.
void append_transitions(const TrajectoryRecord& record, const ConvexBody& body,
                        std::vector<Transition>& out);

std::vector<Transition> transitions(const std::vector<TrajectoryRecord>& ensemble,
                                    const ConvexBody& body);

DriftReport drift_report(const std::vector<Transition>& ts, DriftFunctional functional,
                         const DriftConditioning& conditioning, int d, int M);

struct DecreaseReport {
  std::int64_t n_increments = 0;
  double frequency = 0.0;  // of F(n+1) - F(n) < -F(n)/(4M)
  double standard_error = 0.0;
  double bound = 0.0;      // 4^{-d}
  bool pass = false;       // frequency >= bound - 3 se
};

DecreaseReport decrease_probability_report(const std::vector<Transition>& ts, int d, int M);

// ---------------------------------------------------------------------------
// Exodus time.

struct GeometricFit {
  ChiSquareResult chi_square;
  std::vector<std::int64_t> observed;  // tau - 1 = 1..14, then >= 15
  std::vector<double> expected;
};

struct ExodusReport {
  std::int64_t n_runs = 0;
  std::int64_t n_reached = 0;
  bool all_finite = false;
  double mean_tau = 0.0;
  double se_tau = 0.0;
  std::vector<std::int64_t> tau_histogram;  // index = tau
  std::optional<GeometricFit> m2_geometric;  // only for M = 2
};

inline constexpr int kGeometricCells = 15;

ExodusReport exodus_statistics(const std::vector<std::optional<std::int64_t>>& taus, int M);

// Fit of tau - 1 against Geometric(1/2) on {1..14} plus the pooled tail.
GeometricFit geometric_half_fit(const std::vector<std::int64_t>& taus);

// ---------------------------------------------------------------------------
// Atom signatures in an ensemble of limit points.

struct AtomRung {
  double eps = 0.0;
  std::int64_t max_cluster_count = 0;  // most points in a closed eps-ball around one point
  double pair_fraction = 0.0;          // ordered pairs i != j within eps
  double probe_hit_fraction = 0.0;     // points within eps of some probe
};

struct AtomScanReport {
  std::vector<AtomRung> ladder;
  std::int64_t exact_collisions = 0;  // points equal to an earlier point
};

std::vector<double> default_eps_ladder();

AtomScanReport atom_scan(const std::vector<Point>& limits, const std::vector<Point>& probes,
                         const std::vector<double>& eps_ladder = default_eps_ladder());

// ---------------------------------------------------------------------------
// Tightness of the limit around the mean at an anchor step.

struct TightnessReport {
  std::int64_t n_runs = 0;
  double coverage = 0.0;
  double standard_error = 0.0;
  double required = 0.0;  // 1 - eps
  double radius_coeff = 0.0;
  bool pass = false;      // coverage >= required - 3 se
};

TightnessReport tightness_coverage(const std::vector<TrajectoryRecord>& ensemble, double eps,
                                   const TheoryConstants& constants);

// ---------------------------------------------------------------------------
// Two-step removal patterns from the start {-1, 1} on the line.

enum class Remark1Class { kTwoStepMinusOneZero, kOther };

Remark1Class remark1_region(double z1, double z2);

struct Remark1Replay {
  bool legal = false;     // both arrivals join the configuration
  bool near_tie = false;
  Remark1Class observed = Remark1Class::kOther;
};

Remark1Replay remark1_replay(double z1, double z2);

// ---------------------------------------------------------------------------
// Removal-class map of a planar configuration.

inline constexpr int kNotInKeep = -1;

struct KeepMap {
  int nx = 0;
  int ny = 0;
  std::vector<double> xs;  // cell centers
  std::vector<double> ys;
  std::vector<int> cls;    // row-major by iy then ix; removal index or kNotInKeep
  int at(int ix, int iy) const { return cls[static_cast<std::size_t>(iy) * nx + ix]; }
};

KeepMap keepmap_grid(const Configuration& x, const ConvexBody& body, const Box& bbox, int nx,
                     int ny);

// ---------------------------------------------------------------------------
// Shape statistics of long scale-free runs.

struct ShapeRatioReport {
  std::int64_t n_steps = 0;
  double threshold = 0.01;
  double fraction_at_least = 0.0;  // of steps with d_min / D >= threshold
  double min = 0.0;
  double q10 = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  double max = 0.0;
};

// Runs the FullSpace chain from `initial` for blocks * block_steps steps,
// rescaling and recentering between blocks, and summarizes d_min / D.
ShapeRatioReport shape_ratio_statistics(const Configuration& initial, std::uint64_t seed,
                                        std::int64_t blocks, std::int64_t block_steps,
                                        double threshold = 0.01);

}  // namespace jante

#endif  // JANTE_ANALYSIS_HPP_
