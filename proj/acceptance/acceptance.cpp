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


// Acceptance suite. Runs every numbered criterion at full size and prints one
// PASS/FAIL line each; exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jante/analysis.hpp"
#include "jante/app.hpp"
#include "jante/configuration.hpp"
#include "jante/constants.hpp"
#include "jante/errors.hpp"
#include "jante/geometry.hpp"
#include "jante/keepset.hpp"
#include "jante/process.hpp"
#include "jante/rng.hpp"
#include "jante/stats.hpp"

namespace {

using namespace jante;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Configuration gaussian_config(Rng& rng, int d, int M, double scale = 1.0) {
  std::vector<Point> pts;
  for (int i = 0; i < M; ++i) {
    Point p(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) p[static_cast<std::size_t>(k)] = scale * rng.normal();
    pts.push_back(std::move(p));
  }
  return Configuration::create(pts);
}

Configuration cube_config(Rng& rng, int d, int M) {
  std::vector<Point> pts;
  for (int i = 0; i < M; ++i) {
    Point p(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) p[static_cast<std::size_t>(k)] = rng.uniform();
    pts.push_back(std::move(p));
  }
  return Configuration::create(pts);
}

ConvexBody unit_cube(int d) {
  return ConvexBody::box(Point(static_cast<std::size_t>(d), 0.0),
                         Point(static_cast<std::size_t>(d), 1.0));
}

Point uniform_in_ball(Rng& rng, const Ball& b) {
  Point out(b.center.dim());
  sample_uniform_ball(rng, b.center, b.radius, out.coords());
  return out;
}

// z drawn around X so that a sizeable share lands in Keep and the rest near it.
Point probe_near(Rng& rng, const Configuration& x) {
  const KeepBalls kb = keep_balls(x);
  return uniform_in_ball(rng, Ball{kb.outer.center, 1.25 * kb.outer.radius});
}

// 1. Every membership form agrees outside near ties.
Outcome keep_equivalence() {
  const auto t0 = Clock::now();
  Rng rng(101);
  const ConvexBody spaces[3] = {ConvexBody::full_space(1), ConvexBody::full_space(2),
                                ConvexBody::full_space(3)};
  const std::int64_t n = 100000;
  std::int64_t mismatches = 0, ties = 0, inside = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 3);
    const int M = 2 + static_cast<int>(rng.next_u64() % 5);
    const Configuration x = gaussian_config(rng, d, M);
    const Point z = probe_near(rng, x);
    const KeepMembershipForms forms = keep_membership_forms(x, spaces[d - 1], z);
    const bool tie = removal_choice(x, z).near_tie;
    if (tie) ++ties;
    if (!forms.agree() && !tie) ++mismatches;
    if (forms.definition) ++inside;
  }
  const double secs = seconds_since(t0);
  const double tie_rate = static_cast<double>(ties) / static_cast<double>(n);
  Outcome o;
  o.pass = mismatches == 0 && tie_rate < 1e-6 && secs < 30.0;
  o.detail = "n=100000 mismatches=" + std::to_string(mismatches) +
             " near_tie_rate=" + fmt("%.3g", tie_rate) + " in_keep=" + std::to_string(inside) +
             " time=" + fmt("%.2fs", secs);
  return o;
}

// 2. Both closed forms of the F difference against raw pair sums.
Outcome f_identity_check() {
  Rng rng(102);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 3);
    const int M = 2 + static_cast<int>(rng.next_u64() % 5);
    const Configuration x = gaussian_config(rng, d, M);
    const Point z = probe_near(rng, x);
    const std::size_t j = rng.next_u64() % static_cast<std::uint64_t>(M);
    worst = std::max(worst, f_identity(x, z, j).max_relative_discrepancy());
  }
  return {worst <= 1e-9, "n=10000 max_rel_discrepancy=" + fmt("%.3g", worst)};
}

// 3. Keep sits inside the outer ball and contains the inner and leave-one-out balls.
Outcome sandwich() {
  Rng rng(103);
  const ConvexBody spaces[3] = {ConvexBody::full_space(1), ConvexBody::full_space(2),
                                ConvexBody::full_space(3)};
  std::int64_t points = 0, outer_v = 0, inner_v = 0, loo_v = 0;
  while (points < 100000) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 3);
    const int M = 2 + static_cast<int>(rng.next_u64() % 5);
    const Configuration x = gaussian_config(rng, d, M);
    const ConvexBody& body = spaces[d - 1];
    const KeepBalls kb = keep_balls(x);
    for (int k = 0; k < 4; ++k, ++points) {
      const Point z = uniform_in_ball(rng, Ball{kb.outer.center, 1.2 * kb.outer.radius});
      if (keep_contains(x, body, z) && distance(z, kb.outer.center) >= kb.outer.radius) ++outer_v;
    }
    for (int k = 0; k < 3; ++k, ++points)
      if (!keep_contains(x, body, uniform_in_ball(rng, kb.inner))) ++inner_v;
    for (int k = 0; k < 3; ++k, ++points) {
      const Ball& b = kb.leave_one_out[rng.next_u64() % kb.leave_one_out.size()];
      if (!keep_contains(x, body, uniform_in_ball(rng, b))) ++loo_v;
    }
  }
  return {outer_v + inner_v + loo_v == 0,
          "points=" + std::to_string(points) + " outer_violations=" + std::to_string(outer_v) +
              " inner_violations=" + std::to_string(inner_v) +
              " leave_one_out_violations=" + std::to_string(loo_v)};
}

// Transitions for one (d, M) cell on a given body, at least `want` of them.
std::vector<Transition> cell_transitions(const ConvexBody& body, int d, int M,
                                         std::uint64_t master, std::int64_t steps_per_run,
                                         std::int64_t want) {
  std::vector<Transition> ts;
  ts.reserve(static_cast<std::size_t>(want));
  const bool full = body.kind() == BodyKind::kFullSpace;
  TrajectoryParams p;
  p.body = body;
  p.recenter = full;
  p.stop.max_steps = steps_per_run;
  // On bounded bodies D must stay well above coordinate resolution.
  if (!full) p.stop.target_D = 1e-9;
  for (std::uint64_t i = 0; static_cast<std::int64_t>(ts.size()) < want; ++i) {
    Rng init(derive_seed(master ^ 0xabcdefULL, i));
    p.initial = full ? gaussian_config(init, d, M) : cube_config(init, d, M);
    p.seed = derive_seed(master, i);
    append_transitions(run_trajectory(p), body, ts);
  }
  ts.resize(static_cast<std::size_t>(want));
  return ts;
}

struct DriftCell {
  std::string label;
  DriftReport drift;
  DecreaseReport decrease;
};

std::vector<DriftCell> g_drift_cells;
double g_drift_seconds = 0.0;

void run_drift_grid() {
  const auto t0 = Clock::now();
  for (int d : {1, 2}) {
    for (int M : {2, 3, 5}) {
      const ConvexBody bodies[2] = {ConvexBody::full_space(static_cast<std::size_t>(d)),
                                    unit_cube(d)};
      for (const ConvexBody& body : bodies) {
        const bool full = body.kind() == BodyKind::kFullSpace;
        const std::vector<Transition> ts = cell_transitions(
            body, d, M, static_cast<std::uint64_t>(1000 + 10 * d + M), full ? 50 : 20, 100000);
        DriftCell c;
        c.label = std::string(full ? "R" : "cube") + std::to_string(d) + "/M" + std::to_string(M);
        c.drift = drift_report(ts, DriftFunctional::kLogF, {}, d, M);
        c.decrease = decrease_probability_report(ts, d, M);
        g_drift_cells.push_back(c);
      }
    }
  }
  g_drift_seconds = seconds_since(t0);
}

// 4. Mean log-drift of F below -4^{-d}/(4M) within 3 se.
Outcome drift_bound() {
  Outcome o{g_drift_cells.size() == 12, ""};
  for (const DriftCell& c : g_drift_cells) {
    o.pass = o.pass && c.drift.pass && c.drift.n_increments == 100000;
    o.detail += c.label + ":" + fmt("%.4f", c.drift.conditional_mean) + "<=" +
                fmt("%.5f", c.drift.bound) + " ";
  }
  o.pass = o.pass && g_drift_seconds < 120.0;
  o.detail += "time=" + fmt("%.1fs", g_drift_seconds);
  return o;
}

// 5. Frequency of a drop by F/(4M) above 4^{-d} within 3 se.
Outcome decrease_probability() {
  Outcome o{g_drift_cells.size() == 12, ""};
  for (const DriftCell& c : g_drift_cells) {
    o.pass = o.pass && c.decrease.pass && c.decrease.n_increments == 100000;
    o.detail += c.label + ":" + fmt("%.4f", c.decrease.frequency) + ">=" +
                fmt("%.4f", c.decrease.bound) + " ";
  }
  return o;
}

// 6. Finite exodus everywhere; Geometric(1/2) law for pairs.
Outcome exodus() {
  Outcome o{true, ""};
  const std::int64_t runs = 100000;
  for (int d : {1, 2}) {
    for (int M : {2, 3, 4}) {
      TrajectoryParams p;
      p.body = ConvexBody::full_space(static_cast<std::size_t>(d));
      p.recenter = true;
      p.record_steps = false;
      p.stop.max_steps = 100000;
      p.stop.require_exodus = true;
      const std::uint64_t master = static_cast<std::uint64_t>(2000 + 10 * d + M);
      std::vector<std::optional<std::int64_t>> taus;
      taus.reserve(static_cast<std::size_t>(runs));
      std::int64_t max_tau = 0;
      for (std::int64_t i = 0; i < runs; ++i) {
        Rng init(derive_seed(master ^ 0x5151ULL, static_cast<std::uint64_t>(i)));
        p.initial = gaussian_config(init, d, M);
        p.seed = derive_seed(master, static_cast<std::uint64_t>(i));
        const TrajectoryRecord r = run_trajectory(p);
        taus.push_back(r.tau);
        if (r.tau) max_tau = std::max(max_tau, *r.tau);
      }
      const ExodusReport rep = exodus_statistics(taus, M);
      const bool finite = rep.all_finite && max_tau < 100000;
      o.pass = o.pass && finite;
      o.detail += "d" + std::to_string(d) + "M" + std::to_string(M) + ":max_tau=" +
                  std::to_string(max_tau) + ",mean=" + fmt("%.4f", rep.mean_tau);
      if (M == 2) {
        const double p_value = rep.m2_geometric ? rep.m2_geometric->chi_square.p_value : 0.0;
        o.pass = o.pass && p_value > 1e-3 && std::abs(rep.mean_tau - 3.0) <= 0.02;
        o.detail += ",chi2_p=" + fmt("%.3g", p_value);
      }
      o.detail += " ";
    }
  }
  return o;
}

// 7. No atoms in limit estimates from a fixed start.
Outcome atom_scan_check() {
  Outcome o{true, ""};
  const Configuration x = Configuration::create({Point{0.15}, Point{0.4}, Point{0.95}});
  const double D0 = 0.8;
  const ConvexBody bodies[2] = {ConvexBody::box(Point{0.0}, Point{1.0}),
                                ConvexBody::full_space(1)};
  for (const ConvexBody& body : bodies) {
    TrajectoryParams p;
    p.initial = x;
    p.body = body;
    p.recenter = body.kind() == BodyKind::kFullSpace;
    p.record_steps = false;
    p.stop.target_D = 1e-12 * D0;
    std::vector<Point> limits;
    limits.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
      p.seed = derive_seed(body.kind() == BodyKind::kFullSpace ? 7002 : 7001,
                           static_cast<std::uint64_t>(i));
      limits.push_back(run_trajectory(p).xi_hat);
    }
    const AtomScanReport r = atom_scan(limits, x.points());
    bool decreasing = true;
    std::string hits;
    for (std::size_t k = 0; k < r.ladder.size(); ++k) {
      if (r.ladder[k].eps < 1e-4 * (1 - 1e-12)) break;
      hits += fmt("%.4g", r.ladder[k].probe_hit_fraction) + "/";
      if (k > 0 && !(r.ladder[k].probe_hit_fraction < r.ladder[k - 1].probe_hit_fraction))
        decreasing = false;
    }
    std::vector<Point> doubled = limits;
    doubled.insert(doubled.end(), limits.begin(), limits.end());
    const AtomScanReport control = atom_scan(doubled, x.points());
    const bool control_flags = control.exact_collisions == 10000;
    o.pass = o.pass && r.exact_collisions == 0 && decreasing && control_flags;
    o.detail += std::string(body.kind() == BodyKind::kFullSpace ? "R" : "[0,1]") +
                ":collisions=" + std::to_string(r.exact_collisions) + ",probe_hits=" + hits +
                ",control_collisions=" + std::to_string(control.exact_collisions) + " ";
  }
  return o;
}

// 8. Two-step removal regions against replayed dynamics.
Outcome two_step_regions() {
  Rng rng(108);
  std::int64_t legal = 0, ties = 0, disagreements = 0, hits = 0;
  while (legal < 10000) {
    const double z1 = rng.uniform(-3.0, 3.0), z2 = rng.uniform(-3.0, 3.0);
    const Remark1Replay r = remark1_replay(z1, z2);
    if (!r.legal) continue;
    ++legal;
    if (r.near_tie) {
      ++ties;
      continue;
    }
    if (r.observed != remark1_region(z1, z2)) ++disagreements;
    if (r.observed == Remark1Class::kTwoStepMinusOneZero) ++hits;
  }
  return {disagreements == 0, "legal=" + std::to_string(legal) + " disagreements=" +
                                  std::to_string(disagreements) + " near_ties=" +
                                  std::to_string(ties) + " region_hits=" + std::to_string(hits)};
}

// 9. Limit within the tightness radius of the anchored mean.
Outcome tightness() {
  TrajectoryParams p;
  p.initial = Configuration::create({Point{-1.0}, Point{1.0}});
  p.body = ConvexBody::full_space(1);
  p.recenter = true;
  p.record_steps = false;
  p.anchor_step = 5;
  p.stop.target_D = 2e-12;
  std::vector<TrajectoryRecord> recs;
  recs.reserve(10000);
  for (int i = 0; i < 10000; ++i) {
    p.seed = derive_seed(109, static_cast<std::uint64_t>(i));
    recs.push_back(run_trajectory(p));
  }
  const TheoryConstants k = compute_constants(1, 2, 1.0);
  const TightnessReport r = tightness_coverage(recs, 0.5, k);
  const bool coeff_ok = std::abs(r.radius_coeff - 12.29) < 0.005;
  return {r.n_runs == 10000 && r.coverage >= 0.5 && coeff_ok,
          "runs=" + std::to_string(r.n_runs) + " coverage=" + fmt("%.4f", r.coverage) +
              " radius_coeff=" + fmt("%.4f", r.radius_coeff)};
}

// Random bounded body of dimension d: box, ball or a cut cube.
ConvexBody random_body(Rng& rng, int d, int kind) {
  const std::size_t n = static_cast<std::size_t>(d);
  if (kind == 0) {
    Point lo(n), hi(n);
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] = rng.uniform(-1.0, 0.0);
      hi[k] = lo[k] + rng.uniform(0.2, 2.0);
    }
    return ConvexBody::box(lo, hi);
  }
  if (kind == 1) {
    Point c(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = rng.uniform(-1.0, 1.0);
    return ConvexBody::ball(c, rng.uniform(0.2, 1.5));
  }
  std::vector<Facet> facets;
  for (std::size_t k = 0; k < n; ++k) {
    Point e(n, 0.0);
    e[k] = 1.0;
    facets.push_back({e, 1.0});
    e[k] = -1.0;
    facets.push_back({e, 0.0});
  }
  Point u(n);
  double norm2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    u[k] = rng.normal();
    norm2 += u[k] * u[k];
  }
  const double len = std::sqrt(norm2);
  for (std::size_t k = 0; k < n; ++k) u[k] /= len;
  const Point centre(n, 0.5);
  facets.push_back({u, dot(u, centre) + rng.uniform(0.05, 0.4)});
  return ConvexBody::polytope(facets, centre);
}

// 10. Shell and ratio volume bounds on random bodies.
Outcome volume_checks() {
  Rng rng(110);
  int shell_v = 0, ratio_v = 0, instances = 0;
  for (int i = 0; i < 100; ++i, ++instances) {
    const int d = 1 + i % 3;
    const ConvexBody body = random_body(rng, d, (i / 3) % 3);
    const Point y = sample_uniform_body(rng, body, kDefaultMaxAttempts);
    const double R = rng.uniform(0.1, 1.5);
    const double r = R * rng.uniform(0.05, 0.95);
    if (shell_volume_check(rng, body, y, R, r, 20000).violation) ++shell_v;
    if (volume_ratio_check(rng, body, y, r, R, 20000).violation) ++ratio_v;
  }
  return {shell_v == 0 && ratio_v == 0, "instances=" + std::to_string(instances) +
                                            " shell_violations=" + std::to_string(shell_v) +
                                            " ratio_violations=" + std::to_string(ratio_v)};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 11. Ensemble CSV independent of the worker count.
Outcome determinism() {
  const auto base = std::filesystem::temp_directory_path() / "jante_acceptance_determinism";
  std::filesystem::remove_all(base);
  const nlohmann::json j = {
      {"d", 2},
      {"M", 3},
      {"body", {{"kind", "box"}, {"lower", {0.0, 0.0}}, {"upper", {1.0, 1.0}}}},
      {"initial",
       {{"random", {{"lower", {0.0, 0.0}}, {"upper", {1.0, 1.0}}, {"seed", 5}}}}},
      {"seed", 111},
      {"n_runs", 400},
      {"stop", {{"require_exodus", true}, {"max_steps", 2000}}}};
  std::vector<std::string> csvs;
  for (std::size_t workers : {1u, 2u, 4u}) {
    app::RunConfig cfg = app::parse_run_config(j);
    cfg.output_dir = (base / ("w" + std::to_string(workers))).string();
    app::cmd_ensemble(cfg, workers);
    csvs.push_back(read_file(std::filesystem::path(cfg.output_dir) / "ensemble.csv"));
  }
  std::filesystem::remove_all(base);
  const bool same = !csvs[0].empty() && csvs[0] == csvs[1] && csvs[0] == csvs[2];
  return {same, "workers=1,2,4 bytes=" + std::to_string(csvs[0].size()) +
                    (same ? " identical" : " differ")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "keep_equivalence", keep_equivalence},
      {2, "f_identity", f_identity_check},
      {3, "sandwich_inclusions", sandwich},
      {4, "drift_bound",
       [] {
         run_drift_grid();
         return drift_bound();
       }},
      {5, "decrease_probability", decrease_probability},
      {6, "exodus", exodus},
      {7, "atom_scan", atom_scan_check},
      {8, "two_step_regions", two_step_regions},
      {9, "tightness", tightness},
      {10, "volume_bounds", volume_checks},
      {11, "determinism", determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%-4s criterion %2d %-21s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
