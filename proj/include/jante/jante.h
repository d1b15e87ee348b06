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

/* C interface to the jante library. All objects are opaque handles created
 * and destroyed through this API. Functions return a jante_status; on
 * failure jante_last_error() describes the most recent error on the calling
 * thread. Coordinates are passed row-major, one row of `dim` doubles per
 * point. */

#ifndef JANTE_JANTE_H_
#define JANTE_JANTE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define JANTE_API __declspec(dllexport)
#else
#define JANTE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jante_status {
  JANTE_OK = 0,
  JANTE_ERR_INVALID_ARGUMENT = 1,
  JANTE_ERR_DIMENSION_MISMATCH = 2,
  JANTE_ERR_DEGENERATE_CONFIGURATION = 3,
  JANTE_ERR_ATTEMPTS_EXHAUSTED = 4,
  JANTE_ERR_POINT_NOT_IN_KEEP = 5,
  JANTE_ERR_POINT_OUTSIDE_BODY = 6,
  JANTE_ERR_UNBOUNDED_BODY = 7,
  JANTE_ERR_CONFIG = 8,
  JANTE_ERR_IO = 9,
  JANTE_ERR_INVARIANT_VIOLATED = 10,
  JANTE_ERR_VERIFY_FAILED = 11,
  JANTE_ERR_INTERNAL = 12
} jante_status;

typedef struct jante_body jante_body;
typedef struct jante_config jante_config;
typedef struct jante_chain jante_chain;
typedef struct jante_run_config jante_run_config;

JANTE_API const char* jante_version(void);
JANTE_API const char* jante_status_name(jante_status status);
/* Message of the last failure on this thread; empty string if none. */
JANTE_API const char* jante_last_error(void);
JANTE_API void jante_string_free(char* s);

/* Convex bodies. */
JANTE_API jante_status jante_body_full_space(size_t dim, jante_body** out);
JANTE_API jante_status jante_body_box(size_t dim, const double* lower, const double* upper,
                                      jante_body** out);
JANTE_API jante_status jante_body_ball(size_t dim, const double* center, double radius,
                                       jante_body** out);
/* Facet k is {z : normals[k] . z <= offsets[k]} with unit normals. */
JANTE_API jante_status jante_body_polytope(size_t dim, size_t n_facets, const double* normals,
                                           const double* offsets, const double* interior,
                                           jante_body** out);
JANTE_API void jante_body_free(jante_body* body);
JANTE_API size_t jante_body_dim(const jante_body* body);
JANTE_API jante_status jante_body_contains(const jante_body* body, const double* z, int* out);

/* Configurations of M >= 2 distinct points. */
typedef struct jante_functionals {
  double F;
  double A;
  double D;
  double d_min;
  double h;
} jante_functionals;

JANTE_API jante_status jante_config_create(size_t m, size_t dim, const double* coords,
                                           jante_config** out);
JANTE_API void jante_config_free(jante_config* config);
JANTE_API size_t jante_config_size(const jante_config* config);
JANTE_API size_t jante_config_dim(const jante_config* config);
JANTE_API jante_status jante_config_functionals(const jante_config* config,
                                                jante_functionals* out);
/* Mean of the points, `dim` doubles. */
JANTE_API jante_status jante_config_mean(const jante_config* config, double* out);

/* Keep(X; B) membership and the removal index for an arrival z. */
JANTE_API jante_status jante_keep_contains(const jante_config* config, const jante_body* body,
                                           const double* z, int* out);
/* *index = M when z itself would be removed. */
JANTE_API jante_status jante_removal_choice(const jante_config* config, const double* z,
                                            size_t* index, int* near_tie);

/* Single-trajectory Markov chain. */
typedef struct jante_step {
  int64_t n;
  int64_t alpha;
  double F_after;
  double D_after;
  int near_tie;
} jante_step;

JANTE_API jante_status jante_chain_create(const jante_config* initial, const jante_body* body,
                                          uint64_t seed, jante_chain** out);
JANTE_API void jante_chain_free(jante_chain* chain);
JANTE_API jante_status jante_chain_step(jante_chain* chain, jante_step* out);
/* Deterministic step with a given arrival; fails with POINT_NOT_IN_KEEP. */
JANTE_API jante_status jante_chain_step_with_point(jante_chain* chain, const double* z,
                                                   jante_step* out);
JANTE_API int64_t jante_chain_steps(const jante_chain* chain);
/* Writes M * dim coordinates; `capacity` counts doubles. */
JANTE_API jante_status jante_chain_points(const jante_chain* chain, double* out, size_t capacity);
JANTE_API jante_status jante_chain_functionals(const jante_chain* chain, jante_functionals* out);

/* Closed-form constants of the convergence bounds. */
typedef struct jante_constants {
  int d;
  int M;
  double c;
  double gamma;
  int64_t n0_half;
  double drift_bound;
  double prob_bound;
  double drop_factor;
  double C;
  double rho1;
  double rho2;
  double log_rho2;
  double gamma1;
  double gamma2;
  double c1;
  double delta_g;
  double tightness_radius_coeff_half;
} jante_constants;

JANTE_API jante_status jante_compute_constants(int d, int M, double c, jante_constants* out);
JANTE_API jante_status jante_tightness_radius_coeff(int d, int M, double c, double eps,
                                                    double* out);

/* Experiment definitions (JSON) and the command-line commands. */
typedef enum jante_command {
  JANTE_CMD_SIMULATE = 0,
  JANTE_CMD_ENSEMBLE = 1,
  JANTE_CMD_VERIFY = 2,
  JANTE_CMD_KEEPMAP = 3,
  JANTE_CMD_CONSTANTS = 4,
  JANTE_CMD_EXODUS = 5
} jante_command;

JANTE_API jante_status jante_run_config_load(const char* path, jante_run_config** out);
JANTE_API jante_status jante_run_config_parse(const char* json_text, jante_run_config** out);
JANTE_API void jante_run_config_free(jante_run_config* config);
JANTE_API jante_status jante_run_config_set_seed(jante_run_config* config, uint64_t seed);
JANTE_API jante_status jante_run_config_set_runs(jante_run_config* config, int64_t runs);
JANTE_API jante_status jante_run_config_set_output_dir(jante_run_config* config, const char* dir);

/* Runs a command. `workers` = 0 uses the available parallelism. On return
 * *report (if non-null) holds a text summary to release with
 * jante_string_free, also when the status is JANTE_ERR_VERIFY_FAILED. */
JANTE_API jante_status jante_run_command(jante_command command, const jante_run_config* config,
                                         size_t workers, char** report);

#ifdef __cplusplus
}
#endif

#endif /* JANTE_JANTE_H_ */
