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

#ifndef JANTE_GEOMETRY_HPP_
#define JANTE_GEOMETRY_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jante/rng.hpp"

namespace jante {

using ConstCoords = std::span<const double>;
using Coords = std::span<double>;

// A point of R^d. Thin value wrapper over its coordinates.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim, double fill = 0.0) : c_(dim, fill) {}
  Point(std::initializer_list<double> coords) : c_(coords) {}
  explicit Point(std::vector<double> coords) : c_(std::move(coords)) {}
  explicit Point(ConstCoords coords) : c_(coords.begin(), coords.end()) {}

  std::size_t dim() const noexcept { return c_.size(); }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  const double* data() const noexcept { return c_.data(); }
  double* data() noexcept { return c_.data(); }

  ConstCoords coords() const noexcept { return c_; }
  Coords coords() noexcept { return c_; }
  operator ConstCoords() const noexcept { return c_; }  // NOLINT

  const std::vector<double>& values() const noexcept { return c_; }

  bool all_finite() const;

  bool operator==(const Point&) const = default;

 private:
  std::vector<double> c_;
};

double dot(ConstCoords a, ConstCoords b);
double norm(ConstCoords a);
double distance_squared(ConstCoords a, ConstCoords b);
double distance(ConstCoords a, ConstCoords b);

// Returned by distance functions when the complement of the body is empty.
// Compare with is_unbounded_distance() before doing arithmetic on a result.
inline constexpr double kUnboundedDistance = std::numeric_limits<double>::infinity();
inline bool is_unbounded_distance(double v) { return v == kUnboundedDistance; }

struct FullSpace {
  std::size_t dim = 1;
};

struct Box {
  Point lower;
  Point upper;
};

struct Ball {
  Point center;
  double radius = 1.0;
};

struct Facet {
  Point normal;   // unit outward normal
  double offset;  // facet lies on {z : normal.z = offset}
};

struct HalfspacePolytope {
  std::vector<Facet> facets;
  Point interior_witness;
};

enum class BodyKind { kFullSpace, kBox, kBall, kPolytope };

const char* body_kind_name(BodyKind kind);

// Closed convex body with non-empty interior. Immutable after construction.
class ConvexBody {
 public:
  static ConvexBody full_space(std::size_t dim);
  static ConvexBody box(Point lower, Point upper);
  static ConvexBody ball(Point center, double radius);
  static ConvexBody polytope(std::vector<Facet> facets, Point interior_witness);

  std::size_t dim() const noexcept { return dim_; }
  BodyKind kind() const noexcept;
  bool is_bounded() const noexcept { return bounded_; }

  const FullSpace* as_full_space() const { return std::get_if<FullSpace>(&shape_); }
  const Box* as_box() const { return std::get_if<Box>(&shape_); }
  const Ball* as_ball() const { return std::get_if<Ball>(&shape_); }
  const HalfspacePolytope* as_polytope() const {
    return std::get_if<HalfspacePolytope>(&shape_);
  }

  // Membership in the closed set. No dimension check; see contains().
  bool contains_unchecked(ConstCoords z) const;
  double distance_to_complement_unchecked(ConstCoords z) const;

  // Axis-aligned box containing the body; only for bounded bodies.
  const Box& bounding_box() const;

  // Vertices of a polytope (empty for other kinds).
  const std::vector<Point>& vertices() const noexcept { return vertices_; }

  std::string describe() const;

 private:
  using Shape = std::variant<FullSpace, Box, Ball, HalfspacePolytope>;
  ConvexBody(std::size_t dim, Shape shape);

  std::size_t dim_;
  Shape shape_;
  bool bounded_ = false;
  Box bbox_;
  std::vector<Point> vertices_;
};

bool contains(const ConvexBody& body, ConstCoords z);

// dist(z, B^c); 0 outside the interior; kUnboundedDistance for FullSpace.
double distance_to_complement(const ConvexBody& body, ConstCoords z);

// Volume of the unit ball in R^d, with V(0) = 1.
double unit_ball_volume(int d);

// Volume of the cap of height h cut from a d-ball of the given radius,
// 0 <= h <= 2 radius.
double ball_cap_volume(int d, double radius, double height);

// Uniform draw on the open ball B(center, radius), written into `out`.
void sample_uniform_ball(Rng& rng, ConstCoords center, double radius, Coords out);

// Uniform draw on body ∩ B(center, radius) by rejection from the ball.
Point sample_in_body_cap(Rng& rng, const ConvexBody& body, ConstCoords center,
                         double radius, std::int64_t max_attempts);

// Same, writing into `out` and returning the number of ball proposals used.
std::int64_t sample_in_body_cap_into(Rng& rng, const ConvexBody& body,
                                     ConstCoords center, double radius,
                                     std::int64_t max_attempts, Coords out);

// Uniform draw on a bounded body.
Point sample_uniform_body(Rng& rng, const ConvexBody& body, std::int64_t max_attempts);

struct UniformGeometryData {
  double r0 = 1.0;
  double b_r0 = 0.0;
  double c = 1.0;
  bool approximate = false;
};

struct UniformGeometryOptions {
  std::uint64_t seed = 0x5eed;
  int boundary_points = 256;
  int samples_per_point = 20000;
};

double default_r0(const ConvexBody& body);

UniformGeometryData uniform_geometry_constants(const ConvexBody& body, double r0,
                                               const UniformGeometryOptions& opts = {});

struct McEstimate {
  double value = 0.0;
  double se = 0.0;
};

// MC estimate of λ(body ∩ B(center, radius)).
McEstimate cap_volume(Rng& rng, const ConvexBody& body, ConstCoords center,
                      double radius, std::int64_t n_samples);

struct ShellVolumeReport {
  double mc_volume = 0.0;
  double mc_se = 0.0;
  double easy_bound = 0.0;
  double sharp_bound = 0.0;
  bool violation = false;  // mc_volume > min(bounds) + 4 se
};

// Volume of B(y, R) ∩ B ∩ N_r(B^c) against the two isoperimetric bounds.
ShellVolumeReport shell_volume_check(Rng& rng, const ConvexBody& body, ConstCoords y,
                                     double R, double r, std::int64_t n_samples);

struct VolumeRatioReport {
  double ratio = 0.0;
  double se = 0.0;
  double bound = 0.0;  // (r1 / r2)^d
  bool violation = false;  // ratio < bound - 4 se
};

// λ(B ∩ B(x, r1)) / λ(B ∩ B(x, r2)) against (r1/r2)^d, for x in B.
VolumeRatioReport volume_ratio_check(Rng& rng, const ConvexBody& body, ConstCoords x,
                                     double r1, double r2, std::int64_t n_samples);

}  // namespace jante

#endif  // JANTE_GEOMETRY_HPP_
