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

// Exercises the shared library through its C header only.

#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "jante/jante.h"

namespace {

jante_config* three_point_core() {
  const double xy[] = {0.0, 0.0, 10.0, 0.0, 4.0, 6.0};
  jante_config* c = nullptr;
  EXPECT_EQ(jante_config_create(3, 2, xy, &c), JANTE_OK);
  return c;
}

TEST(CApi, StatusNamesAndVersion) {
  EXPECT_STREQ(jante_status_name(JANTE_OK), "OK");
  EXPECT_STREQ(jante_status_name(JANTE_ERR_VERIFY_FAILED), "VerifyFailed");
  EXPECT_STREQ(jante_version(), "0.1.0");
}

TEST(CApi, ThreePointCoreFunctionals) {
  jante_config* c = three_point_core();
  jante_functionals f;
  ASSERT_EQ(jante_config_functionals(c, &f), JANTE_OK);
  EXPECT_NEAR(f.F, 224.0, 1e-12);
  EXPECT_NEAR(f.D, 10.0, 1e-12);
  EXPECT_NEAR(f.d_min, std::sqrt(52.0), 1e-12);
  EXPECT_NEAR(f.A, std::sqrt(292.0) / 3.0, 1e-12);
  double mu[2];
  ASSERT_EQ(jante_config_mean(c, mu), JANTE_OK);
  EXPECT_NEAR(mu[0], 14.0 / 3.0, 1e-12);
  EXPECT_NEAR(mu[1], 2.0, 1e-12);
  EXPECT_EQ(jante_config_size(c), 3u);
  EXPECT_EQ(jante_config_dim(c), 2u);
  jante_config_free(c);
}

TEST(CApi, KeepAndRemoval) {
  jante_config* c = three_point_core();
  jante_body* plane = nullptr;
  ASSERT_EQ(jante_body_full_space(2, &plane), JANTE_OK);
  const double z[] = {5.0, 1.0};
  int in = 0;
  ASSERT_EQ(jante_keep_contains(c, plane, z, &in), JANTE_OK);
  EXPECT_EQ(in, 1);
  size_t index = 99;
  int tie = -1;
  ASSERT_EQ(jante_removal_choice(c, z, &index, &tie), JANTE_OK);
  EXPECT_EQ(index, 1u);
  EXPECT_EQ(tie, 0);
  const double far[] = {100.0, 100.0};
  ASSERT_EQ(jante_keep_contains(c, plane, far, &in), JANTE_OK);
  EXPECT_EQ(in, 0);
  ASSERT_EQ(jante_removal_choice(c, far, &index, nullptr), JANTE_OK);
  EXPECT_EQ(index, 3u);
  jante_body_free(plane);
  jante_config_free(c);
}

TEST(CApi, BodiesValidateInput) {
  jante_body* b = nullptr;
  const double lo[] = {0.0, 0.0}, hi[] = {1.0, 0.0};
  EXPECT_EQ(jante_body_box(2, lo, hi, &b), JANTE_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(b, nullptr);
  EXPECT_NE(std::string(jante_last_error()).find("InvalidArgument"), std::string::npos);
  const double hi2[] = {1.0, 1.0};
  ASSERT_EQ(jante_body_box(2, lo, hi2, &b), JANTE_OK);
  EXPECT_STREQ(jante_last_error(), "");
  int in = 0;
  const double z[] = {0.5, 0.5};
  ASSERT_EQ(jante_body_contains(b, z, &in), JANTE_OK);
  EXPECT_EQ(in, 1);
  EXPECT_EQ(jante_body_dim(b), 2u);
  jante_body_free(b);

  const double normals[] = {-1.0, 0.0, 0.0, -1.0, std::sqrt(0.5), std::sqrt(0.5)};
  const double offsets[] = {0.0, 0.0, std::sqrt(0.5)};
  const double witness[] = {0.2, 0.2};
  ASSERT_EQ(jante_body_polytope(2, 3, normals, offsets, witness, &b), JANTE_OK);
  const double outside[] = {0.8, 0.8};
  ASSERT_EQ(jante_body_contains(b, outside, &in), JANTE_OK);
  EXPECT_EQ(in, 0);
  jante_body_free(b);

  const double center[] = {0.0};
  EXPECT_EQ(jante_body_ball(1, center, -1.0, &b), JANTE_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ConfigurationErrors) {
  jante_config* c = nullptr;
  const double dup[] = {0.5, 0.5};
  EXPECT_EQ(jante_config_create(2, 1, dup, &c), JANTE_ERR_DEGENERATE_CONFIGURATION);
  const double one[] = {0.5};
  EXPECT_EQ(jante_config_create(1, 1, one, &c), JANTE_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(jante_config_create(2, 1, nullptr, &c), JANTE_ERR_INVALID_ARGUMENT);
  const double nan_pts[] = {0.0, NAN};
  EXPECT_EQ(jante_config_create(2, 1, nan_pts, &c), JANTE_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(c, nullptr);
}

TEST(CApi, ChainStepsDecreaseF) {
  const double pts[] = {-1.0, 1.0};
  jante_config* c = nullptr;
  jante_body* line = nullptr;
  jante_chain* chain = nullptr;
  ASSERT_EQ(jante_config_create(2, 1, pts, &c), JANTE_OK);
  ASSERT_EQ(jante_body_full_space(1, &line), JANTE_OK);
  ASSERT_EQ(jante_chain_create(c, line, 7, &chain), JANTE_OK);
  double F = 4.0;
  for (int i = 0; i < 10; ++i) {
    jante_step s;
    ASSERT_EQ(jante_chain_step(chain, &s), JANTE_OK);
    EXPECT_EQ(s.n, i + 1);
    EXPECT_LT(s.F_after, F);
    F = s.F_after;
  }
  EXPECT_EQ(jante_chain_steps(chain), 10);
  jante_functionals f;
  ASSERT_EQ(jante_chain_functionals(chain, &f), JANTE_OK);
  EXPECT_NEAR(f.F, F, 1e-12 * F);
  double buf[2];
  EXPECT_EQ(jante_chain_points(chain, buf, 1), JANTE_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(jante_chain_points(chain, buf, 2), JANTE_OK);
  EXPECT_NEAR(std::abs(buf[0] - buf[1]), f.D, 1e-12);
  jante_chain_free(chain);
  jante_body_free(line);
  jante_config_free(c);
}

TEST(CApi, StepWithPoint) {
  const double pts[] = {-1.0, 1.0};
  jante_config* c = nullptr;
  jante_body* line = nullptr;
  jante_chain* chain = nullptr;
  ASSERT_EQ(jante_config_create(2, 1, pts, &c), JANTE_OK);
  ASSERT_EQ(jante_body_full_space(1, &line), JANTE_OK);
  ASSERT_EQ(jante_chain_create(c, line, 0, &chain), JANTE_OK);
  const double z1 = 0.5, z2 = 0.6, bad = 10.0;
  jante_step s;
  EXPECT_EQ(jante_chain_step_with_point(chain, &bad, &s), JANTE_ERR_POINT_NOT_IN_KEEP);
  ASSERT_EQ(jante_chain_step_with_point(chain, &z1, &s), JANTE_OK);
  EXPECT_EQ(s.alpha, -1);
  ASSERT_EQ(jante_chain_step_with_point(chain, &z2, &s), JANTE_OK);
  EXPECT_EQ(s.alpha, 0);
  EXPECT_NEAR(s.D_after, 0.1, 1e-12);
  jante_chain_free(chain);
  jante_body_free(line);
  jante_config_free(c);
}

TEST(CApi, ChainOnABodyRejectsOutsidePoints) {
  const double pts[] = {0.5, 1.5};
  const double lo[] = {0.0}, hi[] = {1.0};
  jante_config* c = nullptr;
  jante_body* unit = nullptr;
  jante_chain* chain = nullptr;
  ASSERT_EQ(jante_config_create(2, 1, pts, &c), JANTE_OK);
  ASSERT_EQ(jante_body_box(1, lo, hi, &unit), JANTE_OK);
  EXPECT_EQ(jante_chain_create(c, unit, 0, &chain), JANTE_ERR_POINT_OUTSIDE_BODY);
  EXPECT_EQ(chain, nullptr);
  jante_body_free(unit);
  jante_config_free(c);
}

TEST(CApi, Constants) {
  jante_constants k;
  ASSERT_EQ(jante_compute_constants(1, 2, 0.5, &k), JANTE_OK);
  EXPECT_DOUBLE_EQ(k.gamma, 0.5);
  EXPECT_EQ(k.n0_half, 6);
  EXPECT_DOUBLE_EQ(k.drift_bound, 0.03125);
  EXPECT_NEAR(k.tightness_radius_coeff_half, 12.29, 0.005);
  double r = 0.0;
  ASSERT_EQ(jante_tightness_radius_coeff(1, 2, 0.5, 0.5, &r), JANTE_OK);
  EXPECT_DOUBLE_EQ(r, k.tightness_radius_coeff_half);
  EXPECT_EQ(jante_compute_constants(1, 1, 0.5, &k), JANTE_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(jante_compute_constants(1, 2, 0.5, nullptr), JANTE_ERR_INVALID_ARGUMENT);
}

TEST(CApi, RunConfigAndCommands) {
  jante_run_config* cfg = nullptr;
  EXPECT_EQ(jante_run_config_parse("{\"d\": 1, \"M\": 2, \"bogus\": 1}", &cfg), JANTE_ERR_CONFIG);
  EXPECT_EQ(jante_run_config_parse("{not json", &cfg), JANTE_ERR_CONFIG);
  EXPECT_EQ(jante_run_config_load("/nonexistent/config.json", &cfg), JANTE_ERR_IO);
  ASSERT_EQ(jante_run_config_parse(
                "{\"d\": 1, \"M\": 2, \"body\": {\"kind\": \"box\", \"lower\": [0], \"upper\": [1]}}",
                &cfg),
            JANTE_OK);
  char* report = nullptr;
  ASSERT_EQ(jante_run_command(JANTE_CMD_CONSTANTS, cfg, 1, &report), JANTE_OK);
  ASSERT_NE(report, nullptr);
  EXPECT_NE(std::string(report).find("\"gamma\": 0.5"), std::string::npos);
  jante_string_free(report);
  EXPECT_EQ(jante_run_command(JANTE_CMD_SIMULATE, cfg, 1, &report), JANTE_ERR_CONFIG);
  EXPECT_EQ(report, nullptr);
  EXPECT_EQ(jante_run_config_set_runs(cfg, 0), JANTE_ERR_CONFIG);
  EXPECT_EQ(jante_run_config_set_seed(cfg, 3), JANTE_OK);
  jante_run_config_free(cfg);
  EXPECT_EQ(jante_run_command(JANTE_CMD_CONSTANTS, nullptr, 1, &report), JANTE_ERR_INVALID_ARGUMENT);
}

TEST(CApi, VerifyFailureHasItsOwnStatus) {
  const std::string dir = ::testing::TempDir() + "jante_c_api_verify";
  const std::string json =
      "{\"d\": 1, \"M\": 2, \"initial\": {\"points\": [[-1], [1]]}, \"recenter\": true,"
      " \"n_runs\": 300, \"stop\": {\"require_exodus\": true, \"target_D\": 1e-9},"
      " \"verify\": {\"geometric_p_min\": 1.0}, \"output_dir\": \"" + dir + "\"}";
  jante_run_config* cfg = nullptr;
  ASSERT_EQ(jante_run_config_parse(json.c_str(), &cfg), JANTE_OK);
  char* report = nullptr;
  EXPECT_EQ(jante_run_command(JANTE_CMD_VERIFY, cfg, 2, &report), JANTE_ERR_VERIFY_FAILED);
  ASSERT_NE(report, nullptr);
  EXPECT_NE(std::string(report).find("FAIL exodus_geometric_half"), std::string::npos);
  jante_string_free(report);
  jante_run_config_free(cfg);
}

TEST(CApi, LastErrorIsPerThread) {
  jante_config* c = nullptr;
  const double dup[] = {0.5, 0.5};
  ASSERT_EQ(jante_config_create(2, 1, dup, &c), JANTE_ERR_DEGENERATE_CONFIGURATION);
  std::string other;
  std::thread t([&] { other = jante_last_error(); });
  t.join();
  EXPECT_EQ(other, "");
  EXPECT_NE(std::string(jante_last_error()).find("distinct"), std::string::npos);
}

}  // namespace
