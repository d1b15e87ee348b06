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

#ifndef JANTE_CONFIGURATION_HPP_
#define JANTE_CONFIGURATION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "jante/geometry.hpp"

namespace jante {

// Arrival label of a point: -(M-1)..0 for the initial points, n for the
// point that arrived at step n.
using Label = std::int64_t;

// Relative cutoff applied when a configuration is built from outside data:
// points closer than this times max(1, D) count as duplicates.
inline constexpr double kDistinctTolerance = 1e-14;

// Ordered list of M >= 2 distinct points of R^d with stable arrival labels.
// Coordinates are stored row-major, one row per point.
class Configuration {
 public:
  // Empty placeholder; holds no points until assigned from create().
  Configuration() = default;

  // Validates dimensions, finiteness, distinctness and label uniqueness.
  // Default labels are -(M-1), .., 0 in list order.
  static Configuration create(const std::vector<Point>& points, std::vector<Label> labels = {},
                              double distinct_tolerance = kDistinctTolerance);

  static std::vector<Label> initial_labels(std::size_t m);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  ConstCoords point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  Point point_copy(std::size_t i) const { return Point(point(i)); }
  std::vector<Point> points() const;
  Label label(std::size_t i) const { return labels_[i]; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  const std::vector<double>& coords() const noexcept { return coords_; }

  // True iff some stored point equals z exactly.
  bool has_point(ConstCoords z) const;

  // Overwrites point j in place. Only exact duplicates are rejected here: the
  // chain produces legitimately close points that the construction cutoff
  // would refuse.
  void replace(std::size_t j, ConstCoords z, Label label);

  void translate(ConstCoords v);
  void scale(double s);

  // Equality as sets of points, ignoring order and labels.
  bool same_set(const Configuration& other) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<Label> labels_;
};

struct Functionals {
  Point mu;
  Point sigma;
  double F = 0.0;
  double A = 0.0;
  double D = 0.0;
  double d_min = 0.0;
  double h = 0.0;
};

// All geometric functionals; F from the pairwise sum. Throws
// DegenerateConfiguration when two points coincide.
Functionals functionals(const Configuration& x);

// F by the pairwise sum and by M * sum |x_i - mu|^2 respectively.
double moment_of_inertia(const Configuration& x);
double moment_of_inertia_centered(const Configuration& x);

struct InequalityReport {
  static constexpr std::size_t kCount = 6;
  static const std::array<std::string_view, kCount> kNames;
  // Relative slack (rhs - lhs) / max(|lhs|, |rhs|) of each inequality.
  std::array<double, kCount> slack{};
  bool violated = false;  // some slack below -1e-9
};

InequalityReport check_functional_inequalities(const Configuration& x);

// {(x - mu) / sqrt(F)}, labels kept.
Configuration rescale_recenter(const Configuration& x);

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b);
double hausdorff_distance(const Configuration& a, const Configuration& b);

struct BoundaryDistances {
  double d_b = 0.0;           // min over all points
  double d_b_interior = 0.0;  // min over points off the boundary
};

// kUnboundedDistance marks FullSpace and, for d_b_interior, a configuration
// lying entirely on the boundary.
BoundaryDistances distance_to_boundary(const Configuration& x, const ConvexBody& body);

}  // namespace jante

#endif  // JANTE_CONFIGURATION_HPP_
