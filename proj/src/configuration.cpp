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

#include "jante/configuration.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "jante/errors.hpp"

namespace jante {

std::vector<Label> Configuration::initial_labels(std::size_t m) {
  std::vector<Label> labels(m);
  for (std::size_t i = 0; i < m; ++i) labels[i] = static_cast<Label>(i) - static_cast<Label>(m - 1);
  return labels;
}

Configuration Configuration::create(const std::vector<Point>& points, std::vector<Label> labels,
                                    double distinct_tolerance) {
  require(points.size() >= 2, ErrorCode::kInvalidArgument, "a configuration needs M >= 2 points");
  const std::size_t d = points.front().dim();
  require(d >= 1, ErrorCode::kInvalidArgument, "points need dimension >= 1");
  if (labels.empty()) labels = initial_labels(points.size());
  require(labels.size() == points.size(), ErrorCode::kInvalidArgument,
          "one label per point is required");
  std::unordered_set<Label> seen(labels.begin(), labels.end());
  require(seen.size() == labels.size(), ErrorCode::kInvalidArgument, "labels must be distinct");

  Configuration x;
  x.dim_ = d;
  x.labels_ = std::move(labels);
  x.coords_.reserve(points.size() * d);
  for (const auto& p : points) {
    require(p.dim() == d, ErrorCode::kDimensionMismatch, "all points must share one dimension");
    require(p.all_finite(), ErrorCode::kInvalidArgument, "point coordinates must be finite");
    x.coords_.insert(x.coords_.end(), p.values().begin(), p.values().end());
  }
  double d_min = std::numeric_limits<double>::infinity();
  double d_max = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double r = distance(x.point(i), x.point(j));
      d_min = std::min(d_min, r);
      d_max = std::max(d_max, r);
    }
  if (d_min == 0.0 || d_min < distinct_tolerance * std::max(1.0, d_max))
    fail(ErrorCode::kDegenerateConfiguration,
         "points are not distinct (minimal separation " + std::to_string(d_min) + ")");
  return x;
}

std::vector<Point> Configuration::points() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.emplace_back(point(i));
  return out;
}

bool Configuration::has_point(ConstCoords z) const {
  for (std::size_t i = 0; i < size(); ++i)
    if (std::equal(z.begin(), z.end(), point(i).begin())) return true;
  return false;
}

void Configuration::replace(std::size_t j, ConstCoords z, Label label) {
  require(j < size(), ErrorCode::kInvalidArgument, "replacement index out of range");
  require(z.size() == dim_, ErrorCode::kDimensionMismatch, "replacement point dimension mismatch");
  for (std::size_t i = 0; i < size(); ++i) {
    if (i == j) continue;
    require(!std::equal(z.begin(), z.end(), point(i).begin()),
            ErrorCode::kDegenerateConfiguration, "replacement duplicates an existing point");
    require(labels_[i] != label, ErrorCode::kInvalidArgument, "replacement label already in use");
  }
  std::copy(z.begin(), z.end(), coords_.begin() + static_cast<std::ptrdiff_t>(j * dim_));
  labels_[j] = label;
}

void Configuration::translate(ConstCoords v) {
  require(v.size() == dim_, ErrorCode::kDimensionMismatch, "translation dimension mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += v[i % dim_];
}

void Configuration::scale(double s) {
  require(s > 0.0 && std::isfinite(s), ErrorCode::kInvalidArgument, "scale must be positive");
  for (double& c : coords_) c *= s;
}

bool Configuration::same_set(const Configuration& other) const {
  if (other.size() != size() || other.dim() != dim()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (!other.has_point(point(i))) return false;
  return true;
}

namespace {

// mu computed as x_0 + mean(x_i - x_0), which stays accurate when the
// configuration is tiny compared with its distance from the origin.
Point center_of_mass(const Configuration& x) {
  const std::size_t d = x.dim(), m = x.size();
  Point mu(d);
  const ConstCoords anchor = x.point(0);
  for (std::size_t i = 1; i < m; ++i) {
    const ConstCoords p = x.point(i);
    for (std::size_t k = 0; k < d; ++k) mu[k] += p[k] - anchor[k];
  }
  for (std::size_t k = 0; k < d; ++k) mu[k] = anchor[k] + mu[k] / static_cast<double>(m);
  return mu;
}

}  // namespace

double moment_of_inertia(const Configuration& x) {
  double f = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) f += distance_squared(x.point(i), x.point(j));
  return f;
}

double moment_of_inertia_centered(const Configuration& x) {
  // Work relative to x_0 so that the subtraction of mu stays exact-ish.
  const std::size_t d = x.dim(), m = x.size();
  const ConstCoords anchor = x.point(0);
  Point local_mu(d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < d; ++k) local_mu[k] += x.point(i)[k] - anchor[k];
  for (std::size_t k = 0; k < d; ++k) local_mu[k] /= static_cast<double>(m);
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double t = (x.point(i)[k] - anchor[k]) - local_mu[k];
      s += t * t;
    }
  return static_cast<double>(m) * s;
}

Functionals functionals(const Configuration& x) {
  const std::size_t d = x.dim(), m = x.size();
  Functionals out;
  out.mu = center_of_mass(x);
  out.sigma = out.mu;
  for (std::size_t k = 0; k < d; ++k) out.sigma[k] *= static_cast<double>(m);

  double d_min2 = std::numeric_limits<double>::infinity();
  double d_max2 = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double r2 = distance_squared(x.point(i), x.point(j));
      out.F += r2;
      d_min2 = std::min(d_min2, r2);
      d_max2 = std::max(d_max2, r2);
    }
  require(d_min2 > 0.0, ErrorCode::kDegenerateConfiguration, "two points coincide");
  out.d_min = std::sqrt(d_min2);
  out.D = std::sqrt(d_max2);
  double a2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) a2 = std::max(a2, distance_squared(x.point(i), out.mu));
  out.A = std::sqrt(a2);
  out.h = 0.5 * std::log(out.F) - std::log(out.d_min);
  assert(std::abs(out.F - moment_of_inertia_centered(x)) <= 1e-10 * out.F);
  return out;
}

const std::array<std::string_view, InequalityReport::kCount> InequalityReport::kNames = {
    "M/(M-1) A <= D",       "D <= 2A",
    "M(M-1)/2 d^2 <= F",    "F <= M(M-1)/2 D^2",
    "M^2/(M-1) A^2 <= F",   "F <= M^2 A^2",
};

InequalityReport check_functional_inequalities(const Configuration& x) {
  const Functionals f = functionals(x);
  const double m = static_cast<double>(x.size());
  const double pairs = m * (m - 1.0) / 2.0;
  const std::array<std::pair<double, double>, InequalityReport::kCount> sides = {{
      {m / (m - 1.0) * f.A, f.D},
      {f.D, 2.0 * f.A},
      {pairs * f.d_min * f.d_min, f.F},
      {f.F, pairs * f.D * f.D},
      {m * m / (m - 1.0) * f.A * f.A, f.F},
      {f.F, m * m * f.A * f.A},
  }};
  InequalityReport rep;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    const auto [lhs, rhs] = sides[i];
    const double scale = std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
    rep.slack[i] = (rhs - lhs) / scale;
    if (rep.slack[i] < -1e-9) rep.violated = true;
  }
  return rep;
}

Configuration rescale_recenter(const Configuration& x) {
  const Functionals f = functionals(x);
  require(f.F > 0.0, ErrorCode::kDegenerateConfiguration, "F must be positive to rescale");
  Configuration out = x;
  Point shift = f.mu;
  for (std::size_t k = 0; k < shift.dim(); ++k) shift[k] = -shift[k];
  out.translate(shift);
  out.scale(1.0 / std::sqrt(f.F));
  return out;
}

namespace {

double directed_hausdorff(const std::vector<Point>& from, const std::vector<Point>& to) {
  double worst = 0.0;
  for (const auto& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : to) best = std::min(best, distance_squared(p, q));
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  require(!a.empty() && !b.empty(), ErrorCode::kInvalidArgument, "Hausdorff distance of empty set");
  const std::size_t d = a.front().dim();
  for (const auto& p : a) require(p.dim() == d, ErrorCode::kDimensionMismatch, "dimension mismatch");
  for (const auto& p : b) require(p.dim() == d, ErrorCode::kDimensionMismatch, "dimension mismatch");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double hausdorff_distance(const Configuration& a, const Configuration& b) {
  return hausdorff_distance(a.points(), b.points());
}

BoundaryDistances distance_to_boundary(const Configuration& x, const ConvexBody& body) {
  require(x.dim() == body.dim(), ErrorCode::kDimensionMismatch,
          "configuration dimension does not match body");
  BoundaryDistances out{kUnboundedDistance, kUnboundedDistance};
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(body.contains_unchecked(x.point(i)), ErrorCode::kPointOutsideBody,
            "configuration point outside the body");
    const double r = body.distance_to_complement_unchecked(x.point(i));
    out.d_b = std::min(out.d_b, r);
    if (r > 0.0) out.d_b_interior = std::min(out.d_b_interior, r);
  }
  return out;
}

}  // namespace jante
