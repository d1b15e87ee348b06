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

#include "jante/app.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "jante/constants.hpp"
#include "jante/errors.hpp"
#include "jante/keepset.hpp"

namespace jante::app {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::kConfig, what); }

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) config_error("unknown key '" + it.key() + "' in " + where);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) config_error("missing key '" + std::string(key) + "' in " + where);
  return j.at(key);
}

template <typename T>
T get_as(const json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    config_error(what + " has the wrong type");
  }
}

std::int64_t get_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) config_error(what + " must be an integer");
  return j.get<std::int64_t>();
}

std::uint64_t get_u64(const json& j, const std::string& what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    config_error(what + " must be a non-negative integer");
  return j.get<std::uint64_t>();
}

double get_double(const json& j, const std::string& what) {
  if (!j.is_number()) config_error(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) config_error(what + " must be finite");
  return v;
}

Point get_point(const json& j, std::size_t d, const std::string& what) {
  if (!j.is_array()) config_error(what + " must be an array of numbers");
  if (j.size() != d)
    config_error(what + " has " + std::to_string(j.size()) + " coordinates, expected " +
                 std::to_string(d));
  Point p(d);
  for (std::size_t k = 0; k < d; ++k) p[k] = get_double(j[k], what);
  return p;
}

Box get_box(const json& j, std::size_t d, const std::string& where) {
  if (!j.is_object()) config_error(where + " must be an object");
  reject_unknown(j, {"lower", "upper"}, where);
  Box b{get_point(need(j, "lower", where), d, where + ".lower"),
        get_point(need(j, "upper", where), d, where + ".upper")};
  for (std::size_t k = 0; k < d; ++k)
    if (!(b.lower[k] < b.upper[k])) config_error(where + " is empty");
  return b;
}

ConvexBody parse_body(const json& j, std::size_t d) {
  if (!j.is_object()) config_error("body must be an object");
  const std::string kind = get_as<std::string>(need(j, "kind", "body"), "body.kind");
  if (kind == "full_space") {
    reject_unknown(j, {"kind"}, "body");
    return ConvexBody::full_space(d);
  }
  if (kind == "box") {
    reject_unknown(j, {"kind", "lower", "upper"}, "body");
    const Box b = get_box(json{{"lower", need(j, "lower", "body")}, {"upper", need(j, "upper", "body")}}, d, "body");
    return ConvexBody::box(b.lower, b.upper);
  }
  if (kind == "ball") {
    reject_unknown(j, {"kind", "center", "radius"}, "body");
    return ConvexBody::ball(get_point(need(j, "center", "body"), d, "body.center"),
                            get_double(need(j, "radius", "body"), "body.radius"));
  }
  if (kind == "polytope") {
    reject_unknown(j, {"kind", "facets", "interior"}, "body");
    const json& fs = need(j, "facets", "body");
    if (!fs.is_array()) config_error("body.facets must be an array");
    std::vector<Facet> facets;
    for (const json& f : fs) {
      if (!f.is_object()) config_error("each facet must be an object");
      reject_unknown(f, {"normal", "offset"}, "facet");
      Point n = get_point(need(f, "normal", "facet"), d, "facet.normal");
      double off = get_double(need(f, "offset", "facet"), "facet.offset");
      const double len = norm(n);
      if (!(len > 0.0)) config_error("facet normal must be non-zero");
      for (std::size_t k = 0; k < d; ++k) n[k] /= len;
      facets.push_back(Facet{n, off / len});
    }
    return ConvexBody::polytope(std::move(facets),
                                get_point(need(j, "interior", "body"), d, "body.interior"));
  }
  config_error("body.kind must be one of full_space, box, ball, polytope");
}

StopRule parse_stop(const json& j) {
  if (!j.is_object()) config_error("stop must be an object");
  reject_unknown(j, {"max_steps", "target_D", "target_F", "require_exodus"}, "stop");
  StopRule s;
  if (j.contains("max_steps")) s.max_steps = get_int(j["max_steps"], "stop.max_steps");
  if (s.max_steps < 0) config_error("stop.max_steps must be non-negative");
  if (j.contains("target_D")) s.target_D = get_double(j["target_D"], "stop.target_D");
  if (j.contains("target_F")) s.target_F = get_double(j["target_F"], "stop.target_F");
  if (j.contains("require_exodus"))
    s.require_exodus = get_as<bool>(j["require_exodus"], "stop.require_exodus");
  return s;
}

std::size_t initial_size(const RunConfig& cfg) {
  return static_cast<std::size_t>(cfg.M) + (cfg.chain == ChainKind::kOriginal ? 1 : 0);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  f << content;
  if (!f) fail(ErrorCode::kIo, "failed writing " + path.string());
}

json point_json(const Point& p) { return json(p.values()); }

json optional_json(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

const char* chain_kind_name(ChainKind kind) {
  switch (kind) {
    case ChainKind::kJante: return "jante";
    case ChainKind::kOriginal: return "original";
    case ChainKind::kScaleFree: return "scale_free";
  }
  return "unknown";
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) config_error("configuration must be a JSON object");
  reject_unknown(j, {"d", "M", "body", "initial", "chain", "seed", "n_runs", "stop", "recenter",
                     "output_dir", "anchor_step", "keepmap", "verify"},
                 "configuration");
  RunConfig c;
  c.d = static_cast<int>(get_int(need(j, "d", "configuration"), "d"));
  c.M = static_cast<int>(get_int(need(j, "M", "configuration"), "M"));
  if (c.d < 1) config_error("d must be at least 1");
  if (c.M < 2) config_error("M must be at least 2");
  const auto d = static_cast<std::size_t>(c.d);

  if (j.contains("chain")) {
    const std::string kind = get_as<std::string>(j["chain"], "chain");
    if (kind == "jante") c.chain = ChainKind::kJante;
    else if (kind == "original") c.chain = ChainKind::kOriginal;
    else if (kind == "scale_free") c.chain = ChainKind::kScaleFree;
    else config_error("chain must be one of jante, original, scale_free");
  }

  c.body = j.contains("body") ? parse_body(j["body"], d) : ConvexBody::full_space(d);
  if (c.chain == ChainKind::kScaleFree && c.body.kind() != BodyKind::kFullSpace)
    config_error("the scale_free chain runs on full_space only");
  if (c.chain == ChainKind::kOriginal && !c.body.is_bounded())
    config_error("the original chain needs a bounded body");

  if (j.contains("initial")) {
    const json& init = j["initial"];
    if (!init.is_object()) config_error("initial must be an object");
    reject_unknown(init, {"points", "random"}, "initial");
    if (init.contains("points") == init.contains("random"))
      config_error("initial needs exactly one of 'points' or 'random'");
    if (init.contains("points")) {
      const json& pts = init["points"];
      if (!pts.is_array()) config_error("initial.points must be an array");
      std::vector<Point> v;
      for (const json& p : pts) v.push_back(get_point(p, d, "initial point"));
      c.initial_points = std::move(v);
    } else {
      const json& r = init["random"];
      if (!r.is_object()) config_error("initial.random must be an object");
      reject_unknown(r, {"lower", "upper", "seed"}, "initial.random");
      RandomInitial ri;
      ri.box = get_box(json{{"lower", need(r, "lower", "initial.random")},
                            {"upper", need(r, "upper", "initial.random")}},
                       d, "initial.random");
      if (r.contains("seed")) ri.seed = get_u64(r["seed"], "initial.random.seed");
      c.random_initial = ri;
    }
  }

  if (j.contains("seed")) c.seed = get_u64(j["seed"], "seed");
  if (j.contains("n_runs")) c.n_runs = get_int(j["n_runs"], "n_runs");
  if (c.n_runs < 1) config_error("n_runs must be at least 1");
  if (j.contains("stop")) c.stop = parse_stop(j["stop"]);
  if (j.contains("recenter")) c.recenter = get_as<bool>(j["recenter"], "recenter");
  if (c.recenter && c.body.kind() != BodyKind::kFullSpace)
    config_error("recenter is only allowed on full_space");
  if (c.chain == ChainKind::kScaleFree) c.recenter = true;
  if (j.contains("output_dir")) c.output_dir = get_as<std::string>(j["output_dir"], "output_dir");
  if (j.contains("anchor_step")) {
    c.anchor_step = get_int(j["anchor_step"], "anchor_step");
    if (*c.anchor_step < 0) config_error("anchor_step must be non-negative");
  }

  if (j.contains("keepmap")) {
    const json& k = j["keepmap"];
    if (!k.is_object()) config_error("keepmap must be an object");
    reject_unknown(k, {"lower", "upper", "nx", "ny"}, "keepmap");
    if (k.contains("lower") || k.contains("upper"))
      c.keepmap.bbox = get_box(json{{"lower", need(k, "lower", "keepmap")},
                                    {"upper", need(k, "upper", "keepmap")}},
                               d, "keepmap");
    if (k.contains("nx")) c.keepmap.nx = static_cast<int>(get_int(k["nx"], "keepmap.nx"));
    if (k.contains("ny")) c.keepmap.ny = static_cast<int>(get_int(k["ny"], "keepmap.ny"));
    if (c.keepmap.nx < 1 || c.keepmap.ny < 1 || c.keepmap.nx > 10000 || c.keepmap.ny > 10000)
      config_error("keepmap resolution must lie in 1..10000");
  }
  if (j.contains("verify")) {
    const json& v = j["verify"];
    if (!v.is_object()) config_error("verify must be an object");
    reject_unknown(v, {"tightness_eps", "geometric_p_min"}, "verify");
    if (v.contains("tightness_eps"))
      c.verify.tightness_eps = get_double(v["tightness_eps"], "verify.tightness_eps");
    if (!(c.verify.tightness_eps > 0.0 && c.verify.tightness_eps < 1.0))
      config_error("verify.tightness_eps must lie in (0, 1)");
    if (v.contains("geometric_p_min"))
      c.verify.geometric_p_min = get_double(v["geometric_p_min"], "verify.geometric_p_min");
  }

  if (c.initial_points) {
    if (c.initial_points->size() != initial_size(c))
      config_error("initial.points has " + std::to_string(c.initial_points->size()) +
                   " points, the " + chain_kind_name(c.chain) + " chain with M = " +
                   std::to_string(c.M) + " needs " + std::to_string(initial_size(c)));
    for (const Point& p : *c.initial_points)
      if (!contains(c.body, p)) fail(ErrorCode::kPointOutsideBody, "initial point outside the body");
    Configuration::create(*c.initial_points);  // distinctness
  }
  if (c.random_initial && c.body.is_bounded()) {
    const Box& bb = c.body.bounding_box();
    for (std::size_t k = 0; k < d; ++k)
      if (c.random_initial->box.upper[k] < bb.lower[k] || c.random_initial->box.lower[k] > bb.upper[k])
        config_error("initial.random box misses the body");
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::kIo, "cannot open config " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return parse_run_config(j);
}

Configuration initial_configuration(const RunConfig& cfg) {
  if (cfg.initial_points) return Configuration::create(*cfg.initial_points);
  if (!cfg.random_initial) config_error("this command needs an 'initial' configuration");
  const std::size_t n = initial_size(cfg);
  const auto d = static_cast<std::size_t>(cfg.d);
  Rng rng(cfg.random_initial->seed);
  std::vector<Point> pts;
  std::int64_t attempts = 0;
  while (pts.size() < n) {
    if (++attempts > 1'000'000)
      fail(ErrorCode::kAttemptsExhausted, "no random initial point inside the body");
    Point p(d);
    for (std::size_t k = 0; k < d; ++k)
      p[k] = rng.uniform(cfg.random_initial->box.lower[k], cfg.random_initial->box.upper[k]);
    if (contains(cfg.body, p)) pts.push_back(std::move(p));
  }
  return Configuration::create(pts);
}

StopRule effective_stop(const RunConfig& cfg, const Configuration& initial) {
  StopRule s = cfg.stop;
  if (!s.target_D && !s.target_F && !s.require_exodus) {
    const Configuration core = cfg.chain == ChainKind::kOriginal
                                   ? OriginalChainState::create(initial, cfg.body).core()
                                   : initial;
    s.target_D = 1e-12 * functionals(core).D;
  }
  return s;
}

TrajectoryParams trajectory_params(const RunConfig& cfg, const Configuration& initial,
                                   std::uint64_t seed) {
  TrajectoryParams p;
  p.body = cfg.body;
  p.initial = initial;
  p.seed = seed;
  p.stop = effective_stop(cfg, initial);
  p.recenter = cfg.recenter;
  p.anchor_step = cfg.anchor_step;
  return p;
}

TrajectoryRecord run_one(const RunConfig& cfg, const TrajectoryParams& params) {
  return cfg.chain == ChainKind::kOriginal ? run_original_trajectory(params)
                                           : run_trajectory(params);
}

std::size_t default_workers() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

EnsembleResult run_ensemble(const RunConfig& cfg, std::size_t workers, bool keep_transitions) {
  EnsembleResult e;
  e.initial = initial_configuration(cfg);
  const TrajectoryParams base = trajectory_params(cfg, e.initial, 0);
  const std::function<RunRow(std::size_t)> one = [&](std::size_t i) {
    TrajectoryParams p = base;
    p.seed = derive_seed(cfg.seed, i);
    p.record_steps = keep_transitions;
    const TrajectoryRecord rec = run_one(cfg, p);
    RunRow row;
    row.run = i;
    row.seed = p.seed;
    row.tau = rec.tau;
    row.n_final = rec.n_final;
    row.xi_hat = rec.xi_hat;
    row.F_final = rec.F_final;
    row.reason = rec.stop_reason;
    row.near_ties = rec.near_ties;
    row.anchor = rec.anchor;
    if (keep_transitions) append_transitions(rec, cfg.body, row.transitions);
    return row;
  };
  e.rows = parallel_map<RunRow>(static_cast<std::size_t>(cfg.n_runs), workers, one);
  return e;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_csv(const TrajectoryRecord& rec) {
  const std::size_t d = rec.initial.dim();
  std::string out = "n";
  for (std::size_t k = 1; k <= d; ++k) out += ",y_" + std::to_string(k);
  out += ",alpha,F_after,near_tie\n";
  for (const StepRecord& s : rec.steps) {
    out += std::to_string(s.n);
    for (std::size_t k = 0; k < d; ++k) out += "," + format_double(s.y[k]);
    out += "," + std::to_string(s.alpha) + "," + format_double(s.F_after) + "," +
           (s.near_tie ? "1" : "0") + "\n";
  }
  return out;
}

json trajectory_summary(const TrajectoryRecord& rec, std::uint64_t seed) {
  return json{{"tau", optional_json(rec.tau)},
              {"xi_hat", point_json(rec.xi_hat)},
              {"n_final", rec.n_final},
              {"stop_reason", stop_reason_name(rec.stop_reason)},
              {"seed", seed},
              {"F_final", rec.F_final},
              {"D_final", rec.D_final},
              {"near_ties", rec.near_ties},
              {"proposals", rec.proposals}};
}

std::string ensemble_csv(const EnsembleResult& e, std::size_t d) {
  std::string out = "run,seed,tau,n_final";
  for (std::size_t k = 1; k <= d; ++k) out += ",xi_" + std::to_string(k);
  out += ",F_final,reason,ties\n";
  for (const RunRow& r : e.rows) {
    out += std::to_string(r.run) + "," + std::to_string(r.seed) + "," +
           (r.tau ? std::to_string(*r.tau) : std::string()) + "," + std::to_string(r.n_final);
    for (std::size_t k = 0; k < d; ++k) out += "," + format_double(r.xi_hat[k]);
    out += "," + format_double(r.F_final) + "," + stop_reason_name(r.reason) + "," +
           std::to_string(r.near_ties) + "\n";
  }
  return out;
}

std::string keepmap_csv(const KeepMap& m) {
  std::string out = "ix,iy,x,y,class\n";
  for (int iy = 0; iy < m.ny; ++iy)
    for (int ix = 0; ix < m.nx; ++ix)
      out += std::to_string(ix) + "," + std::to_string(iy) + "," +
             format_double(m.xs[static_cast<std::size_t>(ix)]) + "," +
             format_double(m.ys[static_cast<std::size_t>(iy)]) + "," +
             std::to_string(m.at(ix, iy)) + "\n";
  return out;
}

std::string atom_ladder_csv(const AtomScanReport& r) {
  std::string out = "eps,max_cluster_count,pair_fraction,probe_hit_fraction\n";
  for (const AtomRung& g : r.ladder)
    out += format_double(g.eps) + "," + std::to_string(g.max_cluster_count) + "," +
           format_double(g.pair_fraction) + "," + format_double(g.probe_hit_fraction) + "\n";
  return out;
}

std::string tau_histogram_csv(const ExodusReport& r) {
  std::string out = "tau,count,geometric_expected\n";
  for (std::size_t t = 0; t < r.tau_histogram.size(); ++t) {
    if (r.tau_histogram[t] == 0) continue;
    std::string expected;
    if (r.m2_geometric && t >= 2)
      expected = format_double(static_cast<double>(r.n_reached) * std::ldexp(1.0, -static_cast<int>(t - 1)));
    out += std::to_string(t) + "," + std::to_string(r.tau_histogram[t]) + "," + expected + "\n";
  }
  return out;
}

json to_json(const TheoryConstants& k) {
  return json{{"d", k.d},
              {"M", k.M},
              {"c", k.c},
              {"gamma", k.gamma},
              {"n0_half", k.n0(0.5)},
              {"drift_bound", k.drift_bound},
              {"prob_bound", k.prob_bound},
              {"drop_factor", k.drop_factor},
              {"C", k.C},
              {"rho1", k.rho1},
              {"rho2", k.rho2},
              {"log_rho2", k.log_rho2},
              {"gamma1", k.gamma1},
              {"gamma2", k.gamma2},
              {"c1", k.c1},
              {"delta_g", k.delta_g},
              {"tightness_radius_coeff_half", k.tightness_radius_coeff(0.5)}};
}

json to_json(const DriftReport& r) {
  return json{{"functional", drift_functional_name(r.functional)},
              {"n_increments", r.n_increments},
              {"conditional_mean", finite_or_null(r.conditional_mean)},
              {"standard_error", finite_or_null(r.standard_error)},
              {"bound", finite_or_null(r.bound)},
              {"pass", r.pass},
              {"descriptive", r.descriptive},
              {"empty", r.empty}};
}

json to_json(const DecreaseReport& r) {
  return json{{"n_increments", r.n_increments}, {"frequency", r.frequency},
              {"standard_error", r.standard_error}, {"bound", r.bound}, {"pass", r.pass}};
}

json to_json(const ExodusReport& r) {
  json j{{"n_runs", r.n_runs},
         {"n_reached", r.n_reached},
         {"all_finite", r.all_finite},
         {"mean_tau", finite_or_null(r.mean_tau)},
         {"se_tau", finite_or_null(r.se_tau)}};
  if (r.m2_geometric) {
    j["m2_geometric"] = json{{"chi_square", r.m2_geometric->chi_square.statistic},
                             {"dof", r.m2_geometric->chi_square.dof},
                             {"p_value", r.m2_geometric->chi_square.p_value},
                             {"observed", r.m2_geometric->observed},
                             {"expected", r.m2_geometric->expected}};
  }
  return j;
}

json to_json(const AtomScanReport& r) {
  json ladder = json::array();
  for (const AtomRung& g : r.ladder)
    ladder.push_back(json{{"eps", g.eps},
                          {"max_cluster_count", g.max_cluster_count},
                          {"pair_fraction", g.pair_fraction},
                          {"probe_hit_fraction", g.probe_hit_fraction}});
  return json{{"exact_collisions", r.exact_collisions}, {"ladder", ladder}};
}

json to_json(const TightnessReport& r) {
  return json{{"n_runs", r.n_runs}, {"coverage", r.coverage},
              {"standard_error", r.standard_error}, {"required", r.required},
              {"radius_coeff", r.radius_coeff}, {"pass", r.pass}};
}

json constants_report(const RunConfig& cfg) {
  double c = 1.0, r0 = 1.0;
  bool approximate = false;
  if (cfg.body.kind() != BodyKind::kFullSpace) {
    r0 = default_r0(cfg.body);
    const UniformGeometryData u = uniform_geometry_constants(cfg.body, r0);
    c = u.c;
    approximate = u.approximate;
  }
  json j = to_json(compute_constants(cfg.d, cfg.M, c));
  j["body"] = body_kind_name(cfg.body.kind());
  j["r0"] = r0;
  j["c_approximate"] = approximate;
  return j;
}

void apply_overrides(RunConfig& cfg, const CommandOverrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.runs) {
    if (*o.runs < 1) config_error("--runs must be at least 1");
    cfg.n_runs = *o.runs;
  }
  if (o.out_dir) cfg.output_dir = *o.out_dir;
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  if (cfg.n_runs != 1) config_error("simulate needs n_runs = 1; use ensemble for more runs");
  const Configuration initial = initial_configuration(cfg);
  const TrajectoryParams p = trajectory_params(cfg, initial, cfg.seed);
  const TrajectoryRecord rec = run_one(cfg, p);
  const std::filesystem::path dir(cfg.output_dir);
  write_file(dir / "trajectory.csv", trajectory_csv(rec));
  json summary = trajectory_summary(rec, cfg.seed);
  summary["chain"] = chain_kind_name(cfg.chain);
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  CommandResult r;
  r.report = "simulate: " + std::to_string(rec.n_final) + " steps, stop_reason " +
             stop_reason_name(rec.stop_reason) + ", wrote " + (dir / "trajectory.csv").string() +
             " and " + (dir / "summary.json").string();
  return r;
}

namespace {

struct EnsembleReports {
  ExodusReport exodus;
  DriftReport log_drift, h_drift, g_drift;
  DecreaseReport decrease;
  AtomScanReport atoms;
  std::optional<TightnessReport> tightness;
  std::vector<Point> probes;
};

EnsembleReports analyse(const RunConfig& cfg, const EnsembleResult& e) {
  EnsembleReports out;
  std::vector<std::optional<std::int64_t>> taus;
  std::vector<Transition> ts;
  std::vector<Point> limits;
  std::vector<TrajectoryRecord> anchored;
  for (const RunRow& r : e.rows) {
    taus.push_back(r.tau);
    ts.insert(ts.end(), r.transitions.begin(), r.transitions.end());
    limits.push_back(r.xi_hat);
    if (cfg.anchor_step) {
      TrajectoryRecord rec;
      rec.xi_hat = r.xi_hat;
      rec.anchor = r.anchor;
      anchored.push_back(std::move(rec));
    }
  }
  out.exodus = exodus_statistics(taus, cfg.M);
  out.log_drift = drift_report(ts, DriftFunctional::kLogF, {}, cfg.d, cfg.M);
  const TheoryConstants k = compute_constants(cfg.d, cfg.M, 1.0);
  DriftConditioning h_cond;
  h_cond.h_min = k.rho1;
  if (cfg.body.kind() != BodyKind::kFullSpace) h_cond.A_max = default_r0(cfg.body);
  out.h_drift = drift_report(ts, DriftFunctional::kH, h_cond, cfg.d, cfg.M);
  DriftConditioning g_cond;
  if (cfg.body.kind() != BodyKind::kFullSpace) g_cond.g_min = std::log(1.0 / k.delta_g);
  out.g_drift = drift_report(ts, DriftFunctional::kG, g_cond, cfg.d, cfg.M);
  out.decrease = decrease_probability_report(ts, cfg.d, cfg.M);
  out.probes = e.initial.points();
  out.atoms = atom_scan(limits, out.probes);
  if (cfg.anchor_step)
    out.tightness = tightness_coverage(anchored, cfg.verify.tightness_eps,
                                       compute_constants(cfg.d, cfg.M, 1.0));
  return out;
}

json reports_json(const RunConfig& cfg, const EnsembleReports& a) {
  json j{{"chain", chain_kind_name(cfg.chain)},
         {"d", cfg.d},
         {"M", cfg.M},
         {"seed", cfg.seed},
         {"n_runs", cfg.n_runs},
         {"limit_estimate", "xi_hat is the mean of the final configuration; its error is of order sqrt(F_final)"},
         {"exodus", to_json(a.exodus)},
         {"drift", json::array({to_json(a.log_drift), to_json(a.h_drift), to_json(a.g_drift)})},
         {"decrease_probability", to_json(a.decrease)},
         {"atom_scan", to_json(a.atoms)}};
  if (a.tightness) j["tightness"] = to_json(*a.tightness);
  return j;
}

std::string drift_csv(const EnsembleReports& a) {
  std::string out = "functional,n_increments,mean,se,bound,pass\n";
  for (const DriftReport* r : {&a.log_drift, &a.h_drift, &a.g_drift})
    out += std::string(drift_functional_name(r->functional)) + "," +
           std::to_string(r->n_increments) + "," + format_double(r->conditional_mean) + "," +
           format_double(r->standard_error) + "," + format_double(r->bound) + "," +
           (r->pass ? "1" : "0") + "\n";
  return out;
}

void write_ensemble_outputs(const RunConfig& cfg, const EnsembleResult& e, const EnsembleReports& a) {
  const std::filesystem::path dir(cfg.output_dir);
  write_file(dir / "ensemble.csv", ensemble_csv(e, static_cast<std::size_t>(cfg.d)));
  write_file(dir / "ensemble_summary.json", reports_json(cfg, a).dump(2) + "\n");
  write_file(dir / "atom_ladder.csv", atom_ladder_csv(a.atoms));
  write_file(dir / "tau_histogram.csv", tau_histogram_csv(a.exodus));
  write_file(dir / "drift.csv", drift_csv(a));
}

}  // namespace

CommandResult cmd_ensemble(const RunConfig& cfg, std::size_t workers) {
  const EnsembleResult e = run_ensemble(cfg, workers, true);
  const EnsembleReports a = analyse(cfg, e);
  write_ensemble_outputs(cfg, e, a);
  CommandResult r;
  std::ostringstream s;
  s << "ensemble: " << cfg.n_runs << " runs, " << a.exodus.n_reached << " reached exodus";
  if (std::isfinite(a.exodus.mean_tau)) s << ", mean tau " << a.exodus.mean_tau;
  s << ", wrote outputs to " << cfg.output_dir;
  r.report = s.str();
  return r;
}

CommandResult cmd_verify(const RunConfig& cfg, std::size_t workers) {
  const EnsembleResult e = run_ensemble(cfg, workers, true);
  const EnsembleReports a = analyse(cfg, e);
  write_ensemble_outputs(cfg, e, a);

  std::vector<CheckResult> checks;
  checks.push_back({"logF_drift", a.log_drift.pass, a.log_drift.conditional_mean,
                    a.log_drift.bound, a.log_drift.standard_error});
  checks.push_back({"decrease_probability", a.decrease.pass, a.decrease.frequency,
                    a.decrease.bound, a.decrease.standard_error});
  checks.push_back({"no_exact_collisions", a.atoms.exact_collisions == 0,
                    static_cast<double>(a.atoms.exact_collisions), 0.0, 0.0});
  if (cfg.stop.require_exodus) {
    checks.push_back({"exodus_finite", a.exodus.all_finite, static_cast<double>(a.exodus.n_reached),
                      static_cast<double>(a.exodus.n_runs), 0.0});
    // Equal removal odds for the pair, hence the geometric law, need the
    // reflection symmetry of full_space.
    if (a.exodus.m2_geometric && cfg.body.kind() == BodyKind::kFullSpace)
      checks.push_back({"exodus_geometric_half",
                        a.exodus.m2_geometric->chi_square.p_value > cfg.verify.geometric_p_min,
                        a.exodus.m2_geometric->chi_square.p_value, cfg.verify.geometric_p_min,
                        0.0});
  }
  if (a.tightness)
    checks.push_back({"tightness", a.tightness->pass, a.tightness->coverage, a.tightness->required,
                      a.tightness->standard_error});

  CommandResult r;
  json jc = json::array();
  std::ostringstream s;
  for (const CheckResult& c : checks) {
    if (!c.pass) r.verify_failed = true;
    jc.push_back(json{{"name", c.name}, {"pass", c.pass}, {"value", finite_or_null(c.value)},
                      {"bound", finite_or_null(c.bound)}, {"se", finite_or_null(c.se)}});
    s << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
      << " bound=" << format_double(c.bound) << " se=" << format_double(c.se) << "\n";
  }
  s << "diagnostic h_drift n=" << a.h_drift.n_increments
    << (a.h_drift.empty ? " (empty conditioning set)" : "") << "\n";
  s << (r.verify_failed ? "verify: FAILED" : "verify: all checks passed");
  write_file(std::filesystem::path(cfg.output_dir) / "verify.json",
             json{{"pass", !r.verify_failed}, {"checks", jc}}.dump(2) + "\n");
  r.report = s.str();
  return r;
}

CommandResult cmd_keepmap(const RunConfig& cfg) {
  if (cfg.d != 2) config_error("keepmap needs d = 2");
  const Configuration initial = initial_configuration(cfg);
  const Configuration core = cfg.chain == ChainKind::kOriginal
                                 ? OriginalChainState::create(initial, cfg.body).core()
                                 : initial;
  Box bbox;
  if (cfg.keepmap.bbox) {
    bbox = *cfg.keepmap.bbox;
  } else {
    const Ball outer = keep_balls(core).outer;
    const double r = 1.1 * outer.radius;
    bbox = Box{Point{outer.center[0] - r, outer.center[1] - r},
               Point{outer.center[0] + r, outer.center[1] + r}};
  }
  const KeepMap m = keepmap_grid(core, cfg.body, bbox, cfg.keepmap.nx, cfg.keepmap.ny);
  const std::filesystem::path path = std::filesystem::path(cfg.output_dir) / "keepmap.csv";
  write_file(path, keepmap_csv(m));
  std::set<int> classes(m.cls.begin(), m.cls.end());
  CommandResult r;
  r.report = "keepmap: " + std::to_string(m.nx) + "x" + std::to_string(m.ny) + " grid, " +
             std::to_string(classes.size()) + " distinct classes, wrote " + path.string();
  return r;
}

CommandResult cmd_constants(const RunConfig& cfg) {
  CommandResult r;
  r.report = constants_report(cfg).dump(2);
  return r;
}

CommandResult cmd_exodus(const RunConfig& cfg_in, std::size_t workers) {
  RunConfig cfg = cfg_in;
  cfg.stop.require_exodus = true;
  const EnsembleResult e = run_ensemble(cfg, workers, false);
  std::vector<std::optional<std::int64_t>> taus;
  for (const RunRow& row : e.rows) taus.push_back(row.tau);
  const ExodusReport rep = exodus_statistics(taus, cfg.M);
  const std::filesystem::path dir(cfg.output_dir);
  write_file(dir / "exodus.json", to_json(rep).dump(2) + "\n");
  write_file(dir / "tau_histogram.csv", tau_histogram_csv(rep));
  std::ostringstream s;
  s << "exodus: " << rep.n_reached << "/" << rep.n_runs << " runs reached tau";
  if (std::isfinite(rep.mean_tau)) s << ", mean tau " << rep.mean_tau << " (se " << rep.se_tau << ")";
  if (rep.m2_geometric) s << ", geometric(1/2) p = " << rep.m2_geometric->chi_square.p_value;
  CommandResult r;
  r.report = s.str();
  return r;
}

}  // namespace jante::app
