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

#include "jante/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/special_functions/beta.hpp>

#include "jante/errors.hpp"

namespace jante {

bool Point::all_finite() const {
  return std::all_of(c_.begin(), c_.end(), [](double v) { return std::isfinite(v); });
}

double dot(ConstCoords a, ConstCoords b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(ConstCoords a) { return std::sqrt(dot(a, a)); }

double distance_squared(ConstCoords a, ConstCoords b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

double distance(ConstCoords a, ConstCoords b) { return std::sqrt(distance_squared(a, b)); }

const char* body_kind_name(BodyKind kind) {
  switch (kind) {
    case BodyKind::kFullSpace: return "fullspace";
    case BodyKind::kBox: return "box";
    case BodyKind::kBall: return "ball";
    case BodyKind::kPolytope: return "polytope";
  }
  return "unknown";
}

namespace {

void check_point(const Point& p, std::size_t dim, const char* what) {
  if (p.dim() != dim) {
    fail(ErrorCode::kDimensionMismatch,
         std::string(what) + " has dimension " + std::to_string(p.dim()) +
             ", expected " + std::to_string(dim));
  }
  if (!p.all_finite()) {
    fail(ErrorCode::kInvalidArgument,
         std::string(what) + " has non-finite coordinates");
  }
}

// Calls fn(indices) for every k-subset of {0, .., n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(std::span<const std::size_t>(idx));
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Eigen::MatrixXd normal_rows(const std::vector<Facet>& facets, std::span<const std::size_t> rows,
                            std::size_t dim) {
  Eigen::MatrixXd m(rows.size(), dim);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t k = 0; k < dim; ++k) m(r, k) = facets[rows[r]].normal[k];
  return m;
}

// Largest violation of u_i.v <= h_i scaled by each facet's offset magnitude.
bool satisfies_all(const std::vector<Facet>& facets, ConstCoords v, double tol) {
  for (const auto& f : facets) {
    if (dot(f.normal, v) > f.offset + tol * (1.0 + std::abs(f.offset))) return false;
  }
  return true;
}

std::vector<Point> polytope_vertices(const std::vector<Facet>& facets, std::size_t dim) {
  std::vector<Point> out;
  for_each_subset(facets.size(), dim, [&](std::span<const std::size_t> rows) {
    Eigen::MatrixXd a = normal_rows(facets, rows, dim);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < static_cast<Eigen::Index>(dim)) return;
    Eigen::VectorXd rhs(dim);
    for (std::size_t r = 0; r < dim; ++r) rhs(r) = facets[rows[r]].offset;
    Eigen::VectorXd v = lu.solve(rhs);
    Point p(std::vector<double>(v.data(), v.data() + dim));
    if (!p.all_finite() || !satisfies_all(facets, p, 1e-9)) return;
    for (const auto& q : out)
      if (distance(p, q) <= 1e-9 * (1.0 + norm(q))) return;
    out.push_back(std::move(p));
  });
  return out;
}

// True iff the recession cone {v : u_i.v <= 0 for all i} is {0}.
bool polytope_is_bounded(const std::vector<Facet>& facets, std::size_t dim) {
  Eigen::MatrixXd all(facets.size(), dim);
  for (std::size_t r = 0; r < facets.size(); ++r)
    for (std::size_t k = 0; k < dim; ++k) all(r, k) = facets[r].normal[k];
  if (facets.size() < dim + 1) return false;
  Eigen::FullPivLU<Eigen::MatrixXd> full(all);
  if (full.rank() < static_cast<Eigen::Index>(dim)) return false;  // contains a line
  // A pointed cone is non-trivial iff it has an extreme ray, and every extreme
  // ray is cut out by dim-1 linearly independent tight constraints.
  bool bounded = true;
  for_each_subset(facets.size(), dim - 1, [&](std::span<const std::size_t> rows) {
    if (!bounded) return;
    Eigen::VectorXd ray;
    if (rows.empty()) {
      ray = Eigen::VectorXd::Unit(dim, 0);
    } else {
      Eigen::MatrixXd a = normal_rows(facets, rows, dim);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() != static_cast<Eigen::Index>(dim) - 1) return;
      ray = lu.kernel().col(0);
      ray.normalize();
    }
    for (double sign : {1.0, -1.0}) {
      bool feasible = true;
      for (const auto& f : facets) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += f.normal[k] * sign * ray(k);
        if (s > 1e-12) {
          feasible = false;
          break;
        }
      }
      if (feasible) bounded = false;
    }
  });
  return bounded;
}

}  // namespace

ConvexBody::ConvexBody(std::size_t dim, Shape shape) : dim_(dim), shape_(std::move(shape)) {}

ConvexBody ConvexBody::full_space(std::size_t dim) {
  require(dim >= 1, ErrorCode::kInvalidArgument, "dimension must be at least 1");
  return ConvexBody(dim, FullSpace{dim});
}

ConvexBody ConvexBody::box(Point lower, Point upper) {
  const std::size_t dim = lower.dim();
  require(dim >= 1, ErrorCode::kInvalidArgument, "box dimension must be at least 1");
  check_point(lower, dim, "box lower corner");
  check_point(upper, dim, "box upper corner");
  for (std::size_t k = 0; k < dim; ++k)
    require(lower[k] < upper[k], ErrorCode::kInvalidArgument,
            "box requires lower < upper in every coordinate");
  ConvexBody body(dim, Box{lower, upper});
  body.bounded_ = true;
  body.bbox_ = Box{std::move(lower), std::move(upper)};
  return body;
}

ConvexBody ConvexBody::ball(Point center, double radius) {
  const std::size_t dim = center.dim();
  require(dim >= 1, ErrorCode::kInvalidArgument, "ball dimension must be at least 1");
  check_point(center, dim, "ball center");
  require(std::isfinite(radius) && radius > 0.0, ErrorCode::kInvalidArgument,
          "ball radius must be positive");
  Point lo = center, hi = center;
  for (std::size_t k = 0; k < dim; ++k) {
    lo[k] -= radius;
    hi[k] += radius;
  }
  ConvexBody body(dim, Ball{std::move(center), radius});
  body.bounded_ = true;
  body.bbox_ = Box{std::move(lo), std::move(hi)};
  return body;
}

ConvexBody ConvexBody::polytope(std::vector<Facet> facets, Point interior_witness) {
  const std::size_t dim = interior_witness.dim();
  require(dim >= 1, ErrorCode::kInvalidArgument, "polytope dimension must be at least 1");
  require(!facets.empty(), ErrorCode::kInvalidArgument, "polytope needs at least one facet");
  check_point(interior_witness, dim, "interior witness");
  for (const auto& f : facets) {
    check_point(f.normal, dim, "facet normal");
    require(std::isfinite(f.offset), ErrorCode::kInvalidArgument, "facet offset not finite");
    require(std::abs(norm(f.normal) - 1.0) <= 1e-12, ErrorCode::kInvalidArgument,
            "facet normals must be unit vectors");
    require(dot(f.normal, interior_witness) < f.offset, ErrorCode::kInvalidArgument,
            "interior witness must strictly satisfy every facet inequality");
  }
  ConvexBody body(dim, HalfspacePolytope{facets, interior_witness});
  body.vertices_ = polytope_vertices(facets, dim);
  body.bounded_ = polytope_is_bounded(facets, dim);
  if (body.bounded_) {
    Point lo(dim, std::numeric_limits<double>::infinity());
    Point hi(dim, -std::numeric_limits<double>::infinity());
    for (const auto& v : body.vertices_)
      for (std::size_t k = 0; k < dim; ++k) {
        lo[k] = std::min(lo[k], v[k]);
        hi[k] = std::max(hi[k], v[k]);
      }
    body.bbox_ = Box{std::move(lo), std::move(hi)};
  }
  return body;
}

BodyKind ConvexBody::kind() const noexcept {
  switch (shape_.index()) {
    case 0: return BodyKind::kFullSpace;
    case 1: return BodyKind::kBox;
    case 2: return BodyKind::kBall;
    default: return BodyKind::kPolytope;
  }
}

bool ConvexBody::contains_unchecked(ConstCoords z) const {
  switch (shape_.index()) {
    case 0:
      return true;
    case 1: {
      const auto& b = std::get<Box>(shape_);
      for (std::size_t k = 0; k < dim_; ++k)
        if (z[k] < b.lower[k] || z[k] > b.upper[k]) return false;
      return true;
    }
    case 2: {
      const auto& b = std::get<Ball>(shape_);
      return distance_squared(z, b.center) <= b.radius * b.radius;
    }
    default: {
      const auto& p = std::get<HalfspacePolytope>(shape_);
      for (const auto& f : p.facets)
        if (dot(f.normal, z) > f.offset) return false;
      return true;
    }
  }
}

double ConvexBody::distance_to_complement_unchecked(ConstCoords z) const {
  switch (shape_.index()) {
    case 0:
      return kUnboundedDistance;
    case 1: {
      const auto& b = std::get<Box>(shape_);
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < dim_; ++k)
        m = std::min({m, z[k] - b.lower[k], b.upper[k] - z[k]});
      return std::max(0.0, m);
    }
    case 2: {
      const auto& b = std::get<Ball>(shape_);
      return std::max(0.0, b.radius - distance(z, b.center));
    }
    default: {
      const auto& p = std::get<HalfspacePolytope>(shape_);
      double m = std::numeric_limits<double>::infinity();
      for (const auto& f : p.facets) m = std::min(m, f.offset - dot(f.normal, z));
      return std::max(0.0, m);
    }
  }
}

const Box& ConvexBody::bounding_box() const {
  if (!bounded_) fail(ErrorCode::kUnboundedBody, "body " + describe() + " is unbounded");
  return bbox_;
}

std::string ConvexBody::describe() const {
  std::ostringstream os;
  os << body_kind_name(kind()) << "(d=" << dim_;
  if (const auto* p = as_polytope()) os << ", facets=" << p->facets.size();
  os << ")";
  return os.str();
}

bool contains(const ConvexBody& body, ConstCoords z) {
  require(z.size() == body.dim(), ErrorCode::kDimensionMismatch,
          "point dimension does not match body");
  return body.contains_unchecked(z);
}

double distance_to_complement(const ConvexBody& body, ConstCoords z) {
  require(z.size() == body.dim(), ErrorCode::kDimensionMismatch,
          "point dimension does not match body");
  return body.distance_to_complement_unchecked(z);
}

double unit_ball_volume(int d) {
  require(d >= 0, ErrorCode::kInvalidArgument, "dimension must be non-negative");
  if (d == 0) return 1.0;
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double ball_cap_volume(int d, double radius, double height) {
  const double full = unit_ball_volume(d) * std::pow(radius, d);
  if (height <= 0.0) return 0.0;
  if (height >= 2.0 * radius) return full;
  if (height > radius) return full - ball_cap_volume(d, radius, 2.0 * radius - height);
  const double x = std::clamp((2.0 * radius * height - height * height) / (radius * radius), 0.0, 1.0);
  return 0.5 * full * boost::math::ibeta(0.5 * (d + 1), 0.5, x);
}

void sample_uniform_ball(Rng& rng, ConstCoords center, double radius, Coords out) {
  const std::size_t d = center.size();
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      out[k] = rng.normal();
      n2 += out[k] * out[k];
    }
  } while (n2 == 0.0);
  const double scale = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d)) / std::sqrt(n2);
  for (std::size_t k = 0; k < d; ++k) out[k] = center[k] + scale * out[k];
}

std::int64_t sample_in_body_cap_into(Rng& rng, const ConvexBody& body, ConstCoords center,
                                     double radius, std::int64_t max_attempts, Coords out) {
  for (std::int64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    sample_uniform_ball(rng, center, radius, out);
    if (body.contains_unchecked(out)) return attempt;
  }
  fail(ErrorCode::kAttemptsExhausted,
       "no point of " + body.describe() + " found in cap after " +
           std::to_string(max_attempts) + " attempts");
}

Point sample_in_body_cap(Rng& rng, const ConvexBody& body, ConstCoords center, double radius,
                         std::int64_t max_attempts) {
  require(center.size() == body.dim(), ErrorCode::kDimensionMismatch,
          "cap center dimension does not match body");
  require(radius > 0.0 && std::isfinite(radius), ErrorCode::kInvalidArgument,
          "cap radius must be positive");
  require(body.contains_unchecked(center), ErrorCode::kPointOutsideBody,
          "cap center must lie in the body");
  Point out(body.dim());
  sample_in_body_cap_into(rng, body, center, radius, max_attempts, out.coords());
  return out;
}

Point sample_uniform_body(Rng& rng, const ConvexBody& body, std::int64_t max_attempts) {
  const Box& bb = body.bounding_box();
  Point out(body.dim());
  if (const auto* ball = body.as_ball()) {
    sample_uniform_ball(rng, ball->center, ball->radius, out.coords());
    return out;
  }
  for (std::int64_t attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t k = 0; k < body.dim(); ++k)
      out[k] = rng.uniform(bb.lower[k], bb.upper[k]);
    if (body.contains_unchecked(out)) return out;
  }
  fail(ErrorCode::kAttemptsExhausted, "uniform sampling on " + body.describe() + " failed");
}

double default_r0(const ConvexBody& body) {
  switch (body.kind()) {
    case BodyKind::kFullSpace:
      return 1.0;
    case BodyKind::kBox: {
      const auto* b = body.as_box();
      double side = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < body.dim(); ++k) side = std::min(side, b->upper[k] - b->lower[k]);
      return std::min(1.0, 0.5 * side);
    }
    case BodyKind::kBall:
      return std::min(1.0, 0.5 * body.as_ball()->radius);
    case BodyKind::kPolytope:
      return std::min(1.0, body.distance_to_complement_unchecked(body.as_polytope()->interior_witness));
  }
  return 1.0;
}

namespace {

// min over candidate points of the MC volume of body ∩ B(x, r0), using one
// shared set of ball offsets so candidates are compared on common samples.
double min_cap_volume_mc(const ConvexBody& body, const std::vector<Point>& candidates, double r0,
                         const UniformGeometryOptions& opts) {
  const std::size_t d = body.dim();
  Rng rng(opts.seed);
  std::vector<double> offsets(static_cast<std::size_t>(opts.samples_per_point) * d);
  const Point origin(d);
  for (int s = 0; s < opts.samples_per_point; ++s)
    sample_uniform_ball(rng, origin, r0, Coords(offsets.data() + s * d, d));
  const double ball_volume = unit_ball_volume(static_cast<int>(d)) * std::pow(r0, d);
  double best = ball_volume;
  Point probe(d);
  for (const auto& x : candidates) {
    std::int64_t hits = 0;
    for (int s = 0; s < opts.samples_per_point; ++s) {
      for (std::size_t k = 0; k < d; ++k) probe[k] = x[k] + offsets[s * d + k];
      if (body.contains_unchecked(probe)) ++hits;
    }
    best = std::min(best, ball_volume * static_cast<double>(hits) / opts.samples_per_point);
  }
  return best;
}

std::vector<Point> polytope_boundary_sample(const ConvexBody& body, const UniformGeometryOptions& opts) {
  const auto* poly = body.as_polytope();
  const std::size_t d = body.dim();
  std::vector<Point> pts = body.vertices();
  Rng rng(splitmix64(opts.seed));
  Point dir(d);
  const Point origin(d);
  for (int i = 0; i < opts.boundary_points; ++i) {
    sample_uniform_ball(rng, origin, 1.0, dir.coords());
    double t_exit = std::numeric_limits<double>::infinity();
    for (const auto& f : poly->facets) {
      const double rate = dot(f.normal, dir);
      if (rate > 0.0) t_exit = std::min(t_exit, (f.offset - dot(f.normal, poly->interior_witness)) / rate);
    }
    if (!std::isfinite(t_exit)) continue;
    Point p(d);
    for (std::size_t k = 0; k < d; ++k) p[k] = poly->interior_witness[k] + t_exit * dir[k];
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace

UniformGeometryData uniform_geometry_constants(const ConvexBody& body, double r0,
                                               const UniformGeometryOptions& opts) {
  require(r0 > 0.0 && std::isfinite(r0), ErrorCode::kInvalidArgument, "r0 must be positive");
  const int d = static_cast<int>(body.dim());
  const double ball_volume = unit_ball_volume(d) * std::pow(r0, d);
  UniformGeometryData out;
  out.r0 = r0;
  switch (body.kind()) {
    case BodyKind::kFullSpace:
      out.b_r0 = ball_volume;
      break;
    case BodyKind::kBox: {
      const auto* b = body.as_box();
      double side = std::numeric_limits<double>::infinity();
      for (int k = 0; k < d; ++k) side = std::min(side, b->upper[k] - b->lower[k]);
      if (r0 <= side) {
        // A corner sees exactly one orthant of the ball.
        out.b_r0 = std::ldexp(ball_volume, -d);
      } else {
        out.b_r0 = min_cap_volume_mc(body, {b->lower}, r0, opts);
        out.approximate = true;
      }
      break;
    }
    case BodyKind::kBall: {
      // Worst point is on the sphere; the cap is a lens of two balls whose
      // centers are one body radius apart.
      const double radius = body.as_ball()->radius;
      if (r0 >= 2.0 * radius) {
        out.b_r0 = unit_ball_volume(d) * std::pow(radius, d);
      } else {
        const double h_body = r0 * r0 / (2.0 * radius);
        const double h_cap = r0 - h_body;
        out.b_r0 = ball_cap_volume(d, radius, h_body) + ball_cap_volume(d, r0, h_cap);
      }
      break;
    }
    case BodyKind::kPolytope:
      out.b_r0 = min_cap_volume_mc(body, polytope_boundary_sample(body, opts), r0, opts);
      out.approximate = true;
      break;
  }
  out.c = std::clamp(out.b_r0 / ball_volume, std::numeric_limits<double>::min(), 1.0);
  return out;
}

McEstimate cap_volume(Rng& rng, const ConvexBody& body, ConstCoords center, double radius,
                      std::int64_t n_samples) {
  require(n_samples > 0, ErrorCode::kInvalidArgument, "n_samples must be positive");
  require(center.size() == body.dim(), ErrorCode::kDimensionMismatch, "center dimension mismatch");
  const int d = static_cast<int>(body.dim());
  Point p(body.dim());
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    sample_uniform_ball(rng, center, radius, p.coords());
    if (body.contains_unchecked(p)) ++hits;
  }
  const double vol = unit_ball_volume(d) * std::pow(radius, d);
  const double frac = static_cast<double>(hits) / static_cast<double>(n_samples);
  return {vol * frac, vol * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n_samples))};
}

ShellVolumeReport shell_volume_check(Rng& rng, const ConvexBody& body, ConstCoords y, double R,
                                     double r, std::int64_t n_samples) {
  require(y.size() == body.dim(), ErrorCode::kDimensionMismatch, "y dimension mismatch");
  require(r > 0.0 && r < R, ErrorCode::kInvalidArgument, "shell check needs 0 < r < R");
  require(n_samples > 0, ErrorCode::kInvalidArgument, "n_samples must be positive");
  const int d = static_cast<int>(body.dim());
  Point p(body.dim());
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    sample_uniform_ball(rng, y, R, p.coords());
    if (!body.contains_unchecked(p)) continue;
    const double dist = body.distance_to_complement_unchecked(p);
    if (!is_unbounded_distance(dist) && dist < r) ++hits;
  }
  const double vol = unit_ball_volume(d) * std::pow(R, d);
  const double frac = static_cast<double>(hits) / static_cast<double>(n_samples);
  ShellVolumeReport rep;
  rep.mc_volume = vol * frac;
  rep.mc_se = vol * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n_samples));
  rep.easy_bound = 2.0 * r * d * std::sqrt(static_cast<double>(d)) * unit_ball_volume(d - 1) *
                   std::pow(R, d - 1);
  rep.sharp_bound = unit_ball_volume(d) * (std::pow(R, d) - std::pow(R - r, d));
  rep.violation =
      rep.mc_volume > std::min(rep.easy_bound, rep.sharp_bound) * (1.0 + 1e-12) + 4.0 * rep.mc_se;
  return rep;
}

VolumeRatioReport volume_ratio_check(Rng& rng, const ConvexBody& body, ConstCoords x, double r1,
                                     double r2, std::int64_t n_samples) {
  require(0.0 < r1 && r1 < r2, ErrorCode::kInvalidArgument, "ratio check needs 0 < r1 < r2");
  require(contains(body, x), ErrorCode::kPointOutsideBody, "ratio check needs x in the body");
  const McEstimate small = cap_volume(rng, body, x, r1, n_samples);
  const McEstimate large = cap_volume(rng, body, x, r2, n_samples);
  VolumeRatioReport rep;
  rep.bound = std::pow(r1 / r2, static_cast<double>(body.dim()));
  if (small.value <= 0.0 || large.value <= 0.0) {
    // Both caps contain a neighbourhood of x in a body with interior; a zero
    // count only means n_samples is far too small to resolve it.
    rep.ratio = 0.0;
    rep.se = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.ratio = small.value / large.value;
  rep.se = rep.ratio * std::hypot(small.se / small.value, large.se / large.value);
  // Caps that lie wholly inside the body give se = 0 and equality up to
  // rounding, hence the small relative allowance.
  rep.violation = rep.ratio < rep.bound * (1.0 - 1e-12) - 4.0 * rep.se;
  return rep;
}

}  // namespace jante
