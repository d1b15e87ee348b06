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

#include "jante/constants.hpp"

#include <algorithm>
#include <cmath>

#include "jante/errors.hpp"
#include "jante/geometry.hpp"

namespace jante {

TheoryConstants compute_constants(int d, int M, double c) {
  require(d >= 1, ErrorCode::kInvalidArgument, "d must be at least 1");
  require(M >= 2, ErrorCode::kInvalidArgument, "M must be at least 2");
  require(c > 0.0 && c <= 1.0, ErrorCode::kInvalidArgument, "c must lie in (0, 1]");
  const double dd = d, mm = M;
  TheoryConstants t;
  t.d = d;
  t.M = M;
  t.c = c;
  t.gamma = 1.0 - std::pow(4.0, 1.0 - dd) / mm;
  t.prob_bound = std::pow(4.0, -dd);
  t.drop_factor = 1.0 / (4.0 * mm);
  t.drift_bound = t.prob_bound * t.drop_factor;
  t.C = std::pow(c / (2.0 * mm), 1.0 / dd) / (2.0 * mm);
  const double log_term =
      std::log(std::pow(mm, dd + 2.0) * std::pow(4.0, dd + 1.0) / (c * dd)) / dd;
  t.rho1 = std::max(1.0 / t.C, log_term);
  t.log_rho2 = std::log(mm / (2.0 * (mm - 1.0))) - t.rho1;
  t.rho2 = std::exp(t.log_rho2);
  t.gamma1 = 1.0 / (4.0 * mm);
  t.gamma2 = std::pow(mm - 1.0, dd) / (std::pow(2.0, dd + 1.0) * std::pow(mm + 1.0, dd));
  t.c1 = 2.0 * std::pow(dd, 1.5) * unit_ball_volume(d - 1) *
         std::pow((mm + 1.0) / (mm - 1.0), dd - 1.0) / (c * unit_ball_volume(d));
  t.delta_g = 1.0 / (8.0 * t.c1 * mm * mm * std::pow(4.0, dd));
  return t;
}

std::int64_t TheoryConstants::n0(double eps) const {
  require(eps > 0.0 && eps < 1.0, ErrorCode::kInvalidArgument, "eps must lie in (0, 1)");
  const double v = 2.0 * std::log(eps * (1.0 - std::sqrt(gamma))) / std::log(gamma);
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(v)));
}

double TheoryConstants::tightness_radius_coeff(double eps) const {
  const double lead = 2.0 / (M * std::sqrt(M - 1.0));
  return lead * (static_cast<double>(n0(eps)) + 1.0 / (1.0 - std::pow(gamma, 0.25)));
}

EscapeConstants escape_constants(int d, int M, double delta, double Delta) {
  require(d >= 1 && M >= 2, ErrorCode::kInvalidArgument, "need d >= 1 and M >= 2");
  require(delta > 0.0 && Delta > 0.0, ErrorCode::kInvalidArgument,
          "thresholds must be positive");
  const double mm = M;
  EscapeConstants e;
  e.alpha = std::min((mm - 1.0) / (2.0 * mm * (mm + 1.0)), delta / (48.0 * (mm + 1.0)));
  e.gamma = std::sqrt(1.0 - 1.0 / (12.0 * (mm + 1.0)));
  e.n1 = std::max<std::int64_t>(
      0, static_cast<std::int64_t>(std::ceil(std::log(delta / (2.0 * Delta)) / std::log(e.gamma))));
  e.epsilon = std::pow(e.alpha * mm * std::sqrt(mm - 1.0) / (mm + 1.0),
                       static_cast<double>(d) * static_cast<double>(e.n1));
  return e;
}

}  // namespace jante
