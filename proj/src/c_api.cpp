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

#include "jante/jante.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "jante/app.hpp"
#include "jante/configuration.hpp"
#include "jante/constants.hpp"
#include "jante/errors.hpp"
#include "jante/geometry.hpp"
#include "jante/keepset.hpp"
#include "jante/process.hpp"

struct jante_body {
  jante::ConvexBody body;
};

struct jante_config {
  jante::Configuration config;
};

struct jante_chain {
  jante::ChainState state;
  jante::Rng rng;
};

struct jante_run_config {
  jante::app::RunConfig config;
};

namespace {

thread_local std::string g_last_error;

jante_status status_of(jante::ErrorCode code) {
  using jante::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return JANTE_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDimensionMismatch: return JANTE_ERR_DIMENSION_MISMATCH;
    case ErrorCode::kDegenerateConfiguration: return JANTE_ERR_DEGENERATE_CONFIGURATION;
    case ErrorCode::kAttemptsExhausted: return JANTE_ERR_ATTEMPTS_EXHAUSTED;
    case ErrorCode::kPointNotInKeep: return JANTE_ERR_POINT_NOT_IN_KEEP;
    case ErrorCode::kPointOutsideBody: return JANTE_ERR_POINT_OUTSIDE_BODY;
    case ErrorCode::kUnboundedBody: return JANTE_ERR_UNBOUNDED_BODY;
    case ErrorCode::kConfig: return JANTE_ERR_CONFIG;
    case ErrorCode::kIo: return JANTE_ERR_IO;
    case ErrorCode::kInvariantViolated: return JANTE_ERR_INVARIANT_VIOLATED;
  }
  return JANTE_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes and the thread-local
// error message.
template <typename Fn>
jante_status try_(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return JANTE_OK;
  } catch (const jante::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return JANTE_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return JANTE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return JANTE_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) jante::fail(jante::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

jante::Point point_from(const double* z, std::size_t dim) {
  return jante::Point(jante::ConstCoords(z, dim));
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void fill(const jante::Functionals& f, jante_functionals* out) {
  out->F = f.F;
  out->A = f.A;
  out->D = f.D;
  out->d_min = f.d_min;
  out->h = f.h;
}

void fill(const jante::StepRecord& r, jante_step* out) {
  out->n = r.n;
  out->alpha = r.alpha;
  out->F_after = r.F_after;
  out->D_after = r.D_after;
  out->near_tie = r.near_tie ? 1 : 0;
}

jante::Configuration absolute_config(const jante::ChainState& s) {
  const std::size_t d = s.config.dim();
  std::vector<jante::Point> pts = s.config.points();
  for (jante::Point& p : pts)
    for (std::size_t k = 0; k < d; ++k) p[k] += s.offset.dim() == d ? s.offset[k] : 0.0;
  return jante::Configuration::create(pts, s.config.labels(), 0.0);
}

}  // namespace

extern "C" {

const char* jante_version(void) { return "0.1.0"; }

const char* jante_status_name(jante_status status) {
  switch (status) {
    case JANTE_OK: return "OK";
    case JANTE_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case JANTE_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case JANTE_ERR_DEGENERATE_CONFIGURATION: return "DegenerateConfiguration";
    case JANTE_ERR_ATTEMPTS_EXHAUSTED: return "AttemptsExhausted";
    case JANTE_ERR_POINT_NOT_IN_KEEP: return "PointNotInKeep";
    case JANTE_ERR_POINT_OUTSIDE_BODY: return "PointOutsideBody";
    case JANTE_ERR_UNBOUNDED_BODY: return "UnboundedBody";
    case JANTE_ERR_CONFIG: return "ConfigError";
    case JANTE_ERR_IO: return "IoError";
    case JANTE_ERR_INVARIANT_VIOLATED: return "InvariantViolated";
    case JANTE_ERR_VERIFY_FAILED: return "VerifyFailed";
    case JANTE_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* jante_last_error(void) { return g_last_error.c_str(); }

void jante_string_free(char* s) { std::free(s); }

jante_status jante_body_full_space(size_t dim, jante_body** out) {
  return try_([&] {
    need(out, "out");
    *out = new jante_body{jante::ConvexBody::full_space(dim)};
  });
}

jante_status jante_body_box(size_t dim, const double* lower, const double* upper,
                            jante_body** out) {
  return try_([&] {
    need(lower, "lower");
    need(upper, "upper");
    need(out, "out");
    *out = new jante_body{jante::ConvexBody::box(point_from(lower, dim), point_from(upper, dim))};
  });
}

jante_status jante_body_ball(size_t dim, const double* center, double radius, jante_body** out) {
  return try_([&] {
    need(center, "center");
    need(out, "out");
    *out = new jante_body{jante::ConvexBody::ball(point_from(center, dim), radius)};
  });
}

jante_status jante_body_polytope(size_t dim, size_t n_facets, const double* normals,
                                 const double* offsets, const double* interior,
                                 jante_body** out) {
  return try_([&] {
    need(normals, "normals");
    need(offsets, "offsets");
    need(interior, "interior");
    need(out, "out");
    std::vector<jante::Facet> facets;
    for (size_t k = 0; k < n_facets; ++k)
      facets.push_back(jante::Facet{point_from(normals + k * dim, dim), offsets[k]});
    *out = new jante_body{jante::ConvexBody::polytope(std::move(facets), point_from(interior, dim))};
  });
}

void jante_body_free(jante_body* body) { delete body; }

size_t jante_body_dim(const jante_body* body) { return body ? body->body.dim() : 0; }

jante_status jante_body_contains(const jante_body* body, const double* z, int* out) {
  return try_([&] {
    need(body, "body");
    need(z, "z");
    need(out, "out");
    *out = jante::contains(body->body, jante::ConstCoords(z, body->body.dim())) ? 1 : 0;
  });
}

jante_status jante_config_create(size_t m, size_t dim, const double* coords, jante_config** out) {
  return try_([&] {
    need(coords, "coords");
    need(out, "out");
    if (dim == 0) jante::fail(jante::ErrorCode::kInvalidArgument, "dimension must be positive");
    std::vector<jante::Point> pts;
    for (size_t i = 0; i < m; ++i) pts.push_back(point_from(coords + i * dim, dim));
    *out = new jante_config{jante::Configuration::create(pts)};
  });
}

void jante_config_free(jante_config* config) { delete config; }

size_t jante_config_size(const jante_config* config) { return config ? config->config.size() : 0; }

size_t jante_config_dim(const jante_config* config) { return config ? config->config.dim() : 0; }

jante_status jante_config_functionals(const jante_config* config, jante_functionals* out) {
  return try_([&] {
    need(config, "config");
    need(out, "out");
    fill(jante::functionals(config->config), out);
  });
}

jante_status jante_config_mean(const jante_config* config, double* out) {
  return try_([&] {
    need(config, "config");
    need(out, "out");
    const jante::Point mu = jante::functionals(config->config).mu;
    std::memcpy(out, mu.data(), mu.dim() * sizeof(double));
  });
}

jante_status jante_keep_contains(const jante_config* config, const jante_body* body,
                                 const double* z, int* out) {
  return try_([&] {
    need(config, "config");
    need(body, "body");
    need(z, "z");
    need(out, "out");
    *out = jante::keep_contains(config->config, body->body,
                                jante::ConstCoords(z, config->config.dim()))
               ? 1
               : 0;
  });
}

jante_status jante_removal_choice(const jante_config* config, const double* z, size_t* index,
                                  int* near_tie) {
  return try_([&] {
    need(config, "config");
    need(z, "z");
    need(index, "index");
    const jante::RemovalOutcome r =
        jante::removal_choice(config->config, jante::ConstCoords(z, config->config.dim()));
    *index = r.incoming_extreme() ? config->config.size() : r.index;
    if (near_tie) *near_tie = r.near_tie ? 1 : 0;
  });
}

jante_status jante_chain_create(const jante_config* initial, const jante_body* body,
                                uint64_t seed, jante_chain** out) {
  return try_([&] {
    need(initial, "initial");
    need(body, "body");
    need(out, "out");
    *out = new jante_chain{jante::ChainState::create(initial->config, body->body), jante::Rng(seed)};
  });
}

void jante_chain_free(jante_chain* chain) { delete chain; }

jante_status jante_chain_step(jante_chain* chain, jante_step* out) {
  return try_([&] {
    need(chain, "chain");
    const jante::StepRecord r = jante::step_jante(chain->state, chain->rng);
    if (out) fill(r, out);
  });
}

jante_status jante_chain_step_with_point(jante_chain* chain, const double* z, jante_step* out) {
  return try_([&] {
    need(chain, "chain");
    need(z, "z");
    const jante::StepRecord r = jante::step_jante_with_point(
        chain->state, jante::ConstCoords(z, chain->state.config.dim()));
    if (out) fill(r, out);
  });
}

int64_t jante_chain_steps(const jante_chain* chain) { return chain ? chain->state.step : 0; }

jante_status jante_chain_points(const jante_chain* chain, double* out, size_t capacity) {
  return try_([&] {
    need(chain, "chain");
    need(out, "out");
    const jante::Configuration x = absolute_config(chain->state);
    if (capacity < x.coords().size())
      jante::fail(jante::ErrorCode::kInvalidArgument, "output buffer too small");
    std::memcpy(out, x.coords().data(), x.coords().size() * sizeof(double));
  });
}

jante_status jante_chain_functionals(const jante_chain* chain, jante_functionals* out) {
  return try_([&] {
    need(chain, "chain");
    need(out, "out");
    fill(jante::functionals(absolute_config(chain->state)), out);
  });
}

jante_status jante_compute_constants(int d, int M, double c, jante_constants* out) {
  return try_([&] {
    need(out, "out");
    const jante::TheoryConstants k = jante::compute_constants(d, M, c);
    out->d = k.d;
    out->M = k.M;
    out->c = k.c;
    out->gamma = k.gamma;
    out->n0_half = k.n0(0.5);
    out->drift_bound = k.drift_bound;
    out->prob_bound = k.prob_bound;
    out->drop_factor = k.drop_factor;
    out->C = k.C;
    out->rho1 = k.rho1;
    out->rho2 = k.rho2;
    out->log_rho2 = k.log_rho2;
    out->gamma1 = k.gamma1;
    out->gamma2 = k.gamma2;
    out->c1 = k.c1;
    out->delta_g = k.delta_g;
    out->tightness_radius_coeff_half = k.tightness_radius_coeff(0.5);
  });
}

jante_status jante_tightness_radius_coeff(int d, int M, double c, double eps, double* out) {
  return try_([&] {
    need(out, "out");
    *out = jante::compute_constants(d, M, c).tightness_radius_coeff(eps);
  });
}

jante_status jante_run_config_load(const char* path, jante_run_config** out) {
  return try_([&] {
    need(path, "path");
    need(out, "out");
    *out = new jante_run_config{jante::app::load_run_config(path)};
  });
}

jante_status jante_run_config_parse(const char* json_text, jante_run_config** out) {
  return try_([&] {
    need(json_text, "json_text");
    need(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      jante::fail(jante::ErrorCode::kConfig, std::string("malformed JSON: ") + e.what());
    }
    *out = new jante_run_config{jante::app::parse_run_config(j)};
  });
}

void jante_run_config_free(jante_run_config* config) { delete config; }

jante_status jante_run_config_set_seed(jante_run_config* config, uint64_t seed) {
  return try_([&] {
    need(config, "config");
    jante::app::CommandOverrides o;
    o.seed = seed;
    jante::app::apply_overrides(config->config, o);
  });
}

jante_status jante_run_config_set_runs(jante_run_config* config, int64_t runs) {
  return try_([&] {
    need(config, "config");
    jante::app::CommandOverrides o;
    o.runs = runs;
    jante::app::apply_overrides(config->config, o);
  });
}

jante_status jante_run_config_set_output_dir(jante_run_config* config, const char* dir) {
  return try_([&] {
    need(config, "config");
    need(dir, "dir");
    jante::app::CommandOverrides o;
    o.out_dir = std::string(dir);
    jante::app::apply_overrides(config->config, o);
  });
}

jante_status jante_run_command(jante_command command, const jante_run_config* config,
                               size_t workers, char** report) {
  if (report) *report = nullptr;
  bool verify_failed = false;
  const jante_status st = try_([&] {
    need(config, "config");
    const jante::app::RunConfig& cfg = config->config;
    const std::size_t w = workers == 0 ? jante::app::default_workers() : workers;
    jante::app::CommandResult r;
    switch (command) {
      case JANTE_CMD_SIMULATE: r = jante::app::cmd_simulate(cfg); break;
      case JANTE_CMD_ENSEMBLE: r = jante::app::cmd_ensemble(cfg, w); break;
      case JANTE_CMD_VERIFY: r = jante::app::cmd_verify(cfg, w); break;
      case JANTE_CMD_KEEPMAP: r = jante::app::cmd_keepmap(cfg); break;
      case JANTE_CMD_CONSTANTS: r = jante::app::cmd_constants(cfg); break;
      case JANTE_CMD_EXODUS: r = jante::app::cmd_exodus(cfg, w); break;
      default: jante::fail(jante::ErrorCode::kInvalidArgument, "unknown command");
    }
    verify_failed = r.verify_failed;
    if (report) *report = duplicate(r.report);
  });
  if (st == JANTE_OK && verify_failed) {
    g_last_error = "verification failed";
    return JANTE_ERR_VERIFY_FAILED;
  }
  return st;
}

}  // extern "C"
