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

#ifndef JANTE_CONSTANTS_HPP_
#define JANTE_CONSTANTS_HPP_

#include <cstdint>

namespace jante {

// Closed-form constants of the convergence and exodus bounds for given
// dimension d, configuration size M and uniform-geometry constant c.
struct TheoryConstants {
  int d = 1;
  int M = 2;
  double c = 1.0;

  double gamma = 0.0;         // 1 - 4^{1-d}/M, per-step contraction of E F
  double drift_bound = 0.0;   // 4^{-d}/(4M); E dlog F <= -drift_bound
  double prob_bound = 0.0;    // 4^{-d}
  double drop_factor = 0.0;   // 1/(4M)
  double C = 0.0;             // (c/2M)^{1/d} / (2M)
  double rho1 = 0.0;
  double rho2 = 0.0;          // underflows to 0 once rho1 exceeds ~745
  double log_rho2 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double c1 = 0.0;            // boundary drift constant read off its proof
  double delta_g = 0.0;       // 1 / (8 c1 M^2 4^d)

  // ceil(2 log_gamma(eps (1 - sqrt(gamma)))), clamped below at 0.
  std::int64_t n0(double eps) const;
  // (2 / (M sqrt(M-1))) (n0(eps) + 1 / (1 - gamma^{1/4})).
  double tightness_radius_coeff(double eps) const;
};

TheoryConstants compute_constants(int d, int M, double c);

// Explicit constants of the boundary-escape estimate for thresholds
// delta (small) and Delta (large).
struct EscapeConstants {
  double alpha = 0.0;
  double gamma = 0.0;
  std::int64_t n1 = 0;
  double epsilon = 0.0;  // may underflow to 0
};

EscapeConstants escape_constants(int d, int M, double delta, double Delta);

}  // namespace jante

#endif  // JANTE_CONSTANTS_HPP_
