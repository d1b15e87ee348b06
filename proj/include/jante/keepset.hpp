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

#ifndef JANTE_KEEPSET_HPP_
#define JANTE_KEEPSET_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "jante/configuration.hpp"
#include "jante/geometry.hpp"
#include "jante/rng.hpp"

namespace jante {

// Default relative gap, in units of D(X ∪ {z}), under which the two largest
// distances to the augmented center of mass count as a near tie.
inline constexpr double kTieTolerance = 1e-12;

// Keep(X; R^d) as a union of M open balls, plus the sandwich balls around mu.
struct KeepBalls {
  std::vector<Ball> balls;          // center (Sigma - x_j)/(M-1), radius M/(M-1) |x_j - mu|
  Ball outer;                       // B(mu, (M+1)/(M-1) A) contains every ball
  Ball inner;                       // B(mu, A) is inside Keep
  std::vector<Ball> leave_one_out;  // B(mu(X \ x_i), M/(M+1) A) is inside Keep
};

KeepBalls keep_balls(const Configuration& x);

// Keep(X; B) prepared for repeated membership queries. All ball tests run in
// coordinates relative to the first point of X, so decisions stay consistent
// with the stored points when X is tiny compared with its distance from the
// origin. Holds a reference to `body`, which must outlive it.
class KeepRegion {
 public:
  KeepRegion(const Configuration& x, const ConvexBody& body);

  bool contains(ConstCoords z) const;

  const Ball& outer() const noexcept { return outer_; }

  // Exact uniform draw on Keep(X; B) by rejection from B ∩ outer ball.
  // Returns the number of ball proposals consumed.
  std::int64_t sample_into(Rng& rng, std::int64_t max_attempts, Coords out) const;

 private:
  const ConvexBody* body_;
  std::size_t m_;
  std::size_t d_;
  std::vector<double> points_;   // global coordinates, for z ∉ X
  std::vector<double> anchor_;
  std::vector<double> centers_;  // local ball centers, row-major
  std::vector<double> radii2_;
  Ball outer_;
};

bool keep_contains(const Configuration& x, const ConvexBody& body, ConstCoords z);

// Every equivalent membership test, evaluated independently.
struct KeepMembershipForms {
  bool definition = false;   // |z - mu+| < max_s |s - mu+|, mu+ = mu(X ∪ {z})
  bool scaled_norm = false;  // ∃j |Mz - Sigma| < |(M+1)x_j - z - Sigma|
  bool pair_sums = false;    // ∃j sum_{i≠j} |z - x_i|^2 < sum_{i≠j} |x_j - x_i|^2
  bool balls = false;        // ∃j |z - c_j| < M/(M-1) |x_j - mu|
  bool f_decrease = false;   // ∃j F({z} ∪ X \ {x_j}) < F(X), both by raw pair sums
  bool agree() const {
    return definition == scaled_norm && definition == pair_sums && definition == balls &&
           definition == f_decrease;
  }
};

KeepMembershipForms keep_membership_forms(const Configuration& x, const ConvexBody& body,
                                          ConstCoords z);

struct RemovalOutcome {
  static constexpr std::size_t kIncoming = std::numeric_limits<std::size_t>::max();

  std::size_t index = kIncoming;  // index into X, or kIncoming
  bool near_tie = false;
  double gap = 0.0;  // difference of the two largest distances to mu+

  bool incoming_extreme() const noexcept { return index == kIncoming; }
};

// Point of X ∪ {z} farthest from (z + Sigma)/(M+1); smallest index wins ties,
// with z ordered last.
RemovalOutcome removal_choice(const Configuration& x, ConstCoords z,
                              double tie_tolerance = kTieTolerance);

struct FIdentity {
  double lhs = 0.0;   // F(X) - F({z} ∪ X \ {x_j}) from pair sums
  double rhs1 = 0.0;  // (M+1)(|x_j - mu+|^2 - |z - mu+|^2)
  double rhs2 = 0.0;  // (M-1)(|x_j - c_j|^2 - |z - c_j|^2)
  double scale = 0.0; // max(|lhs|, F(X), F(X')), the magnitude rounding acts on

  double max_relative_discrepancy() const;
};

FIdentity f_identity(const Configuration& x, ConstCoords z, std::size_t j);

Point sample_keep(Rng& rng, const Configuration& x, const ConvexBody& body,
                  std::int64_t max_attempts);

struct KeepDraw {
  Point point;
  std::int64_t proposals = 0;
};

KeepDraw sample_keep_counted(Rng& rng, const Configuration& x, const ConvexBody& body,
                             std::int64_t max_attempts);

// MC estimate of λ(Keep(X; B)) from uniform draws on the outer ball.
McEstimate keep_volume(Rng& rng, const Configuration& x, const ConvexBody& body,
                       std::int64_t n_samples);

}  // namespace jante

#endif  // JANTE_KEEPSET_HPP_
