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

#include "jante/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "jante/errors.hpp"
#include "jante/keepset.hpp"

namespace jante {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double g_value(double F, double d_interior) {
  if (is_unbounded_distance(d_interior)) return -std::numeric_limits<double>::infinity();
  return 0.5 * std::log(F) - std::log(d_interior);
}

}  // namespace

const char* drift_functional_name(DriftFunctional f) {
  switch (f) {
    case DriftFunctional::kLogF: return "logF";
    case DriftFunctional::kH: return "h";
    case DriftFunctional::kG: return "g";
  }
  return "unknown";
}

void append_transitions(const TrajectoryRecord& rec, const ConvexBody& body,
                        std::vector<Transition>& out) {
  const Functionals f0 = functionals(rec.initial);
  double F = f0.F, h = f0.h, A = f0.A;
  double g = g_value(f0.F, distance_to_boundary(rec.initial, body).d_b_interior);
  for (const StepRecord& s : rec.steps) {
    if (!s.core_changed) continue;
    Transition t;
    t.F_before = F;
    t.h_before = h;
    t.g_before = g;
    t.A_before = A;
    F = s.F_after;
    A = s.A_after;
    h = 0.5 * std::log(s.F_after) - std::log(s.dmin_after);
    g = g_value(s.F_after, s.d_interior_after);
    t.F_after = F;
    t.h_after = h;
    t.g_after = g;
    out.push_back(t);
  }
}

std::vector<Transition> transitions(const std::vector<TrajectoryRecord>& ensemble,
                                    const ConvexBody& body) {
  std::vector<Transition> out;
  for (const TrajectoryRecord& rec : ensemble) append_transitions(rec, body, out);
  return out;
}

DriftReport drift_report(const std::vector<Transition>& ts, DriftFunctional functional,
                         const DriftConditioning& cond, int d, int M) {
  std::vector<double> inc;
  for (const Transition& t : ts) {
    if (cond.h_min && !(t.h_before >= *cond.h_min)) continue;
    if (cond.A_max && !(t.A_before <= *cond.A_max)) continue;
    if (cond.g_min && !(t.g_before >= *cond.g_min)) continue;
    double v = 0.0;
    switch (functional) {
      case DriftFunctional::kLogF: v = std::log(t.F_after) - std::log(t.F_before); break;
      case DriftFunctional::kH: v = t.h_after - t.h_before; break;
      case DriftFunctional::kG: v = t.g_after - t.g_before; break;
    }
    if (std::isfinite(v)) inc.push_back(v);
  }
  DriftReport r;
  r.functional = functional;
  const MeanSe ms = mean_se(inc);
  r.n_increments = ms.n;
  r.conditional_mean = ms.n > 0 ? ms.mean : kNaN;
  r.standard_error = ms.n > 0 ? ms.se : kNaN;
  switch (functional) {
    case DriftFunctional::kLogF: r.bound = -compute_constants(d, M, 1.0).drift_bound; break;
    case DriftFunctional::kH: r.bound = 0.0; break;
    case DriftFunctional::kG:
      r.bound = kNaN;
      r.descriptive = true;
      break;
  }
  r.empty = ms.n == 0;
  if (r.descriptive)
    r.pass = !r.empty;
  else
    r.pass = !r.empty && r.conditional_mean <= r.bound + 3.0 * r.standard_error;
  return r;
}

DecreaseReport decrease_probability_report(const std::vector<Transition>& ts, int d, int M) {
  const TheoryConstants k = compute_constants(d, M, 1.0);
  DecreaseReport r;
  r.bound = k.prob_bound;
  std::int64_t hits = 0;
  for (const Transition& t : ts)
    if (t.F_after - t.F_before < -k.drop_factor * t.F_before) ++hits;
  r.n_increments = static_cast<std::int64_t>(ts.size());
  if (r.n_increments == 0) return r;
  const double n = static_cast<double>(r.n_increments);
  r.frequency = static_cast<double>(hits) / n;
  r.standard_error = std::sqrt(r.frequency * (1.0 - r.frequency) / n);
  r.pass = r.frequency >= r.bound - 3.0 * r.standard_error;
  return r;
}

GeometricFit geometric_half_fit(const std::vector<std::int64_t>& taus) {
  GeometricFit fit;
  fit.observed.assign(kGeometricCells, 0);
  for (std::int64_t tau : taus) {
    const std::int64_t k = tau - 1;
    require(k >= 1, ErrorCode::kInvalidArgument, "exodus time below 2 is impossible for M = 2");
    fit.observed[static_cast<std::size_t>(std::min<std::int64_t>(k, kGeometricCells) - 1)]++;
  }
  const double n = static_cast<double>(taus.size());
  std::vector<double> obs(kGeometricCells);
  fit.expected.resize(kGeometricCells);
  for (int k = 1; k <= kGeometricCells; ++k) {
    // P(tau - 1 = k) = 2^{-k}; the last cell carries P(tau - 1 >= 15) = 2^{-14}.
    const double p = k < kGeometricCells ? std::ldexp(1.0, -k) : std::ldexp(1.0, -(k - 1));
    fit.expected[static_cast<std::size_t>(k - 1)] = n * p;
    obs[static_cast<std::size_t>(k - 1)] = static_cast<double>(fit.observed[static_cast<std::size_t>(k - 1)]);
  }
  fit.chi_square = chi_square_gof(obs, fit.expected);
  return fit;
}

ExodusReport exodus_statistics(const std::vector<std::optional<std::int64_t>>& taus, int M) {
  ExodusReport r;
  r.n_runs = static_cast<std::int64_t>(taus.size());
  std::vector<double> reached;
  std::vector<std::int64_t> reached_int;
  for (const auto& t : taus) {
    if (!t) continue;
    reached.push_back(static_cast<double>(*t));
    reached_int.push_back(*t);
    if (static_cast<std::size_t>(*t) >= r.tau_histogram.size())
      r.tau_histogram.resize(static_cast<std::size_t>(*t) + 1, 0);
    r.tau_histogram[static_cast<std::size_t>(*t)]++;
  }
  r.n_reached = static_cast<std::int64_t>(reached.size());
  r.all_finite = r.n_runs > 0 && r.n_reached == r.n_runs;
  const MeanSe ms = mean_se(reached);
  r.mean_tau = ms.n > 0 ? ms.mean : kNaN;
  r.se_tau = ms.n > 0 ? ms.se : kNaN;
  if (M == 2 && !reached_int.empty()) r.m2_geometric = geometric_half_fit(reached_int);
  return r;
}

std::vector<double> default_eps_ladder() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

AtomScanReport atom_scan(const std::vector<Point>& limits, const std::vector<Point>& probes,
                         const std::vector<double>& eps_ladder) {
  AtomScanReport r;
  if (limits.empty()) return r;
  const std::size_t d = limits.front().dim();
  for (const Point& p : limits)
    require(p.dim() == d && p.all_finite(), ErrorCode::kDimensionMismatch,
            "limit points must share one dimension and be finite");
  for (const Point& p : probes)
    require(p.dim() == d, ErrorCode::kDimensionMismatch, "probe dimension mismatch");

  std::vector<const Point*> sorted;
  sorted.reserve(limits.size());
  for (const Point& p : limits) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const Point* a, const Point* b) { return a->values() < b->values(); });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (*sorted[i] == *sorted[i - 1]) ++r.exact_collisions;

  const double k = static_cast<double>(limits.size());
  for (double eps : eps_ladder) {
    require(eps > 0.0, ErrorCode::kInvalidArgument, "eps must be positive");
    const double eps2 = eps * eps;
    using Key = std::vector<std::int64_t>;
    std::map<Key, std::vector<std::size_t>> grid;
    std::vector<Key> keys(limits.size(), Key(d));
    for (std::size_t i = 0; i < limits.size(); ++i) {
      for (std::size_t c = 0; c < d; ++c) {
        const double cell = std::floor(limits[i][c] / eps);
        require(std::abs(cell) < 4e18, ErrorCode::kInvalidArgument,
                "limit point too far from the origin for this eps");
        keys[i][c] = static_cast<std::int64_t>(cell);
      }
      grid[keys[i]].push_back(i);
    }

    AtomRung rung;
    rung.eps = eps;
    double pairs = 0.0;
    std::size_t n_offsets = 1;
    for (std::size_t c = 0; c < d; ++c) n_offsets *= 3;
    Key probe_key(d);
    for (std::size_t i = 0; i < limits.size(); ++i) {
      std::int64_t count = 0;
      for (std::size_t o = 0; o < n_offsets; ++o) {
        std::size_t rest = o;
        for (std::size_t c = 0; c < d; ++c) {
          probe_key[c] = keys[i][c] + static_cast<std::int64_t>(rest % 3) - 1;
          rest /= 3;
        }
        const auto it = grid.find(probe_key);
        if (it == grid.end()) continue;
        for (std::size_t j : it->second)
          if (distance_squared(limits[i], limits[j]) <= eps2) ++count;
      }
      rung.max_cluster_count = std::max(rung.max_cluster_count, count);
      pairs += static_cast<double>(count - 1);
    }
    rung.pair_fraction = limits.size() > 1 ? pairs / (k * (k - 1.0)) : 0.0;

    std::int64_t hits = 0;
    for (const Point& p : limits)
      for (const Point& q : probes)
        if (distance_squared(p, q) <= eps2) {
          ++hits;
          break;
        }
    rung.probe_hit_fraction = static_cast<double>(hits) / k;
    r.ladder.push_back(rung);
  }
  return r;
}

TightnessReport tightness_coverage(const std::vector<TrajectoryRecord>& ensemble, double eps,
                                   const TheoryConstants& constants) {
  TightnessReport r;
  r.required = 1.0 - eps;
  r.radius_coeff = constants.tightness_radius_coeff(eps);
  std::int64_t covered = 0;
  for (const TrajectoryRecord& rec : ensemble) {
    if (!rec.anchor) continue;
    ++r.n_runs;
    const double radius = r.radius_coeff * std::sqrt(rec.anchor->F);
    if (distance(rec.xi_hat, rec.anchor->mu) <= radius) ++covered;
  }
  if (r.n_runs == 0) return r;
  const double n = static_cast<double>(r.n_runs);
  r.coverage = static_cast<double>(covered) / n;
  r.standard_error = std::sqrt(r.coverage * (1.0 - r.coverage) / n);
  r.pass = r.coverage >= r.required - 3.0 * r.standard_error;
  return r;
}

Remark1Class remark1_region(double z1, double z2) {
  const bool left = z1 > 0.0 && z1 < 1.0 && z2 > 2.0 * z1 - 1.0 && z2 < (z1 + 1.0) / 2.0;
  const bool right = z1 > 1.0 && z1 < 3.0 && z2 > (z1 + 1.0) / 2.0 && z2 < 2.0 * z1 - 1.0;
  return left || right ? Remark1Class::kTwoStepMinusOneZero : Remark1Class::kOther;
}

Remark1Replay remark1_replay(double z1, double z2) {
  Remark1Replay out;
  ChainState s = ChainState::create(Configuration::create({Point{-1.0}, Point{1.0}}),
                                    ConvexBody::full_space(1));
  const Point y1{z1}, y2{z2};
  if (!KeepRegion(s.config, s.body).contains(y1)) return out;
  const StepRecord a = step_jante_with_point(s, y1);
  if (!KeepRegion(s.config, s.body).contains(y2)) return out;
  const RemovalOutcome pre = removal_choice(s.config, y2, s.tie_tolerance);
  if (pre.incoming_extreme()) {
    out.near_tie = true;
    return out;
  }
  const StepRecord b = step_jante_with_point(s, y2);
  out.legal = true;
  out.near_tie = a.near_tie || b.near_tie;
  if (s.original_remaining == 0 && a.alpha == -1 && b.alpha == 0)
    out.observed = Remark1Class::kTwoStepMinusOneZero;
  return out;
}

KeepMap keepmap_grid(const Configuration& x, const ConvexBody& body, const Box& bbox, int nx,
                     int ny) {
  require(x.dim() == 2 && body.dim() == 2, ErrorCode::kDimensionMismatch,
          "keep maps are planar");
  require(bbox.lower.dim() == 2 && bbox.upper.dim() == 2, ErrorCode::kDimensionMismatch,
          "keep map box must be planar");
  require(bbox.lower[0] < bbox.upper[0] && bbox.lower[1] < bbox.upper[1],
          ErrorCode::kInvalidArgument, "keep map box is empty");
  require(nx >= 1 && ny >= 1, ErrorCode::kInvalidArgument, "grid resolution must be positive");
  KeepMap m;
  m.nx = nx;
  m.ny = ny;
  const double hx = (bbox.upper[0] - bbox.lower[0]) / nx;
  const double hy = (bbox.upper[1] - bbox.lower[1]) / ny;
  for (int i = 0; i < nx; ++i) m.xs.push_back(bbox.lower[0] + (i + 0.5) * hx);
  for (int j = 0; j < ny; ++j) m.ys.push_back(bbox.lower[1] + (j + 0.5) * hy);
  const KeepRegion region(x, body);
  m.cls.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), kNotInKeep);
  Point z(2);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      z[0] = m.xs[static_cast<std::size_t>(i)];
      z[1] = m.ys[static_cast<std::size_t>(j)];
      if (!region.contains(z)) continue;
      const RemovalOutcome r = removal_choice(x, z);
      if (!r.incoming_extreme())
        m.cls[static_cast<std::size_t>(j) * nx + i] = static_cast<int>(r.index);
    }
  return m;
}

ShapeRatioReport shape_ratio_statistics(const Configuration& initial, std::uint64_t seed,
                                        std::int64_t blocks, std::int64_t block_steps,
                                        double threshold) {
  require(blocks >= 1 && block_steps >= 1, ErrorCode::kInvalidArgument,
          "need at least one block of one step");
  ChainState s = ChainState::create(rescale_recenter(initial),
                                    ConvexBody::full_space(initial.dim()));
  Rng rng(seed);
  std::vector<double> ratios;
  ratios.reserve(static_cast<std::size_t>(blocks * block_steps));
  for (std::int64_t b = 0; b < blocks; ++b) {
    for (std::int64_t i = 0; i < block_steps; ++i) {
      const StepRecord r = step_jante(s, rng);
      ratios.push_back(r.dmin_after / r.D_after);
      maybe_recenter(s);
    }
    s.config = rescale_recenter(s.config);
    s.F = moment_of_inertia(s.config);
  }
  ShapeRatioReport out;
  out.n_steps = static_cast<std::int64_t>(ratios.size());
  out.threshold = threshold;
  out.fraction_at_least =
      static_cast<double>(std::count_if(ratios.begin(), ratios.end(),
                                        [&](double v) { return v >= threshold; })) /
      static_cast<double>(ratios.size());
  std::sort(ratios.begin(), ratios.end());
  auto q = [&](double p) {
    return ratios[static_cast<std::size_t>(p * static_cast<double>(ratios.size() - 1))];
  };
  out.min = ratios.front();
  out.q10 = q(0.1);
  out.median = q(0.5);
  out.q90 = q(0.9);
  out.max = ratios.back();
  return out;
}

}  // namespace jante
