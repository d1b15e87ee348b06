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

#include "jante/keepset.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "jante/errors.hpp"

namespace jante {
namespace {

// Points of X relative to x_0, row-major.
std::vector<double> local_coords(const Configuration& x) {
  const std::size_t d = x.dim(), m = x.size();
  const ConstCoords a = x.point(0);
  std::vector<double> out(m * d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < d; ++k) out[i * d + k] = x.point(i)[k] - a[k];
  return out;
}

std::vector<double> local_point(const Configuration& x, ConstCoords z) {
  const ConstCoords a = x.point(0);
  std::vector<double> out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = z[k] - a[k];
  return out;
}

double dist2(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

std::vector<double> column_sums(const std::vector<double>& pts, std::size_t m, std::size_t d) {
  std::vector<double> s(d, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < d; ++k) s[k] += pts[i * d + k];
  return s;
}

double pair_sum(const std::vector<double>& pts, std::size_t m, std::size_t d) {
  double f = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) f += dist2(&pts[i * d], &pts[j * d], d);
  return f;
}

void check_query(const Configuration& x, ConstCoords z) {
  require(z.size() == x.dim(), ErrorCode::kDimensionMismatch,
          "query point dimension does not match configuration");
}

}  // namespace

KeepBalls keep_balls(const Configuration& x) {
  const std::size_t d = x.dim(), m = x.size();
  require(m >= 2, ErrorCode::kDegenerateConfiguration, "Keep needs at least two points");
  const std::vector<double> loc = local_coords(x);
  const std::vector<double> sigma = column_sums(loc, m, d);
  const ConstCoords a = x.point(0);
  const double md = static_cast<double>(m);

  std::vector<double> mu(d);
  for (std::size_t k = 0; k < d; ++k) mu[k] = sigma[k] / md;
  double big_a = 0.0;
  std::vector<double> spread(m);
  for (std::size_t j = 0; j < m; ++j) {
    spread[j] = std::sqrt(dist2(&loc[j * d], mu.data(), d));
    big_a = std::max(big_a, spread[j]);
  }
  require(big_a > 0.0, ErrorCode::kDegenerateConfiguration, "configuration has zero spread");

  KeepBalls out;
  Point mu_global(d);
  for (std::size_t k = 0; k < d; ++k) mu_global[k] = a[k] + mu[k];
  for (std::size_t j = 0; j < m; ++j) {
    Point c(d);
    for (std::size_t k = 0; k < d; ++k) c[k] = a[k] + (sigma[k] - loc[j * d + k]) / (md - 1.0);
    out.balls.push_back({c, md / (md - 1.0) * spread[j]});
    out.leave_one_out.push_back({c, md / (md + 1.0) * big_a});
  }
  out.outer = {mu_global, (md + 1.0) / (md - 1.0) * big_a};
  out.inner = {mu_global, big_a};
  return out;
}

KeepRegion::KeepRegion(const Configuration& x, const ConvexBody& body)
    : body_(&body), m_(x.size()), d_(x.dim()), points_(x.coords()) {
  require(body.dim() == d_, ErrorCode::kDimensionMismatch,
          "configuration dimension does not match body");
  const ConstCoords a = x.point(0);
  anchor_.assign(a.begin(), a.end());
  const std::vector<double> loc = local_coords(x);
  const std::vector<double> sigma = column_sums(loc, m_, d_);
  const double md = static_cast<double>(m_);
  std::vector<double> mu(d_);
  for (std::size_t k = 0; k < d_; ++k) mu[k] = sigma[k] / md;

  centers_.resize(m_ * d_);
  radii2_.resize(m_);
  double big_a = 0.0;
  for (std::size_t j = 0; j < m_; ++j) {
    for (std::size_t k = 0; k < d_; ++k)
      centers_[j * d_ + k] = (sigma[k] - loc[j * d_ + k]) / (md - 1.0);
    const double s = std::sqrt(dist2(&loc[j * d_], mu.data(), d_));
    big_a = std::max(big_a, s);
    const double r = md / (md - 1.0) * s;
    radii2_[j] = r * r;
  }
  require(big_a > 0.0, ErrorCode::kDegenerateConfiguration, "configuration has zero spread");
  Point mu_global(d_);
  for (std::size_t k = 0; k < d_; ++k) mu_global[k] = anchor_[k] + mu[k];
  // The slight inflation keeps rounding in the ball radii from clipping Keep.
  outer_ = {mu_global, (md + 1.0) / (md - 1.0) * big_a * (1.0 + 1e-12)};
}

bool KeepRegion::contains(ConstCoords z) const {
  if (!body_->contains_unchecked(z)) return false;
  double local[16];
  std::vector<double> heap;
  double* zl = local;
  if (d_ > 16) {
    heap.resize(d_);
    zl = heap.data();
  }
  for (std::size_t k = 0; k < d_; ++k) zl[k] = z[k] - anchor_[k];
  bool inside = false;
  for (std::size_t j = 0; j < m_ && !inside; ++j)
    inside = dist2(zl, &centers_[j * d_], d_) < radii2_[j];
  if (!inside) return false;
  for (std::size_t i = 0; i < m_; ++i)
    if (std::equal(z.begin(), z.end(), points_.begin() + static_cast<std::ptrdiff_t>(i * d_)))
      return false;
  return true;
}

std::int64_t KeepRegion::sample_into(Rng& rng, std::int64_t max_attempts, Coords out) const {
  std::int64_t used = 0;
  while (used < max_attempts) {
    used += sample_in_body_cap_into(rng, *body_, outer_.center, outer_.radius,
                                    max_attempts - used, out);
    if (contains(out)) return used;
  }
  fail(ErrorCode::kAttemptsExhausted,
       "no Keep point found after " + std::to_string(max_attempts) + " proposals");
}

bool keep_contains(const Configuration& x, const ConvexBody& body, ConstCoords z) {
  check_query(x, z);
  require(body.dim() == x.dim(), ErrorCode::kDimensionMismatch,
          "configuration dimension does not match body");
  const bool result = KeepRegion(x, body).contains(z);
#ifndef NDEBUG
  if (body.contains_unchecked(z) && !x.has_point(z) && !removal_choice(x, z).near_tie) {
    const KeepMembershipForms forms = keep_membership_forms(x, body, z);
    assert(forms.agree() && forms.balls == result);
  }
#endif
  return result;
}

KeepMembershipForms keep_membership_forms(const Configuration& x, const ConvexBody& body,
                                          ConstCoords z) {
  check_query(x, z);
  KeepMembershipForms f;
  if (!body.contains_unchecked(z) || x.has_point(z)) return f;
  const std::size_t d = x.dim(), m = x.size();
  const double md = static_cast<double>(m);
  const std::vector<double> loc = local_coords(x);
  const std::vector<double> zl = local_point(x, z);
  const std::vector<double> sigma = column_sums(loc, m, d);

  std::vector<double> mu_plus(d), mu(d);
  for (std::size_t k = 0; k < d; ++k) {
    mu_plus[k] = (sigma[k] + zl[k]) / (md + 1.0);
    mu[k] = sigma[k] / md;
  }
  double far = 0.0;
  for (std::size_t j = 0; j < m; ++j) far = std::max(far, dist2(&loc[j * d], mu_plus.data(), d));
  f.definition = dist2(zl.data(), mu_plus.data(), d) < far;

  const double f_x = pair_sum(loc, m, d);
  std::vector<double> swapped(loc);
  std::vector<double> lhs_vec(d), rhs_vec(d), cj(d);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      lhs_vec[k] = md * zl[k] - sigma[k];
      rhs_vec[k] = (md + 1.0) * loc[j * d + k] - zl[k] - sigma[k];
      cj[k] = (sigma[k] - loc[j * d + k]) / (md - 1.0);
    }
    double l2 = 0.0, r2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      l2 += lhs_vec[k] * lhs_vec[k];
      r2 += rhs_vec[k] * rhs_vec[k];
    }
    if (l2 < r2) f.scaled_norm = true;

    double sz = 0.0, sx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == j) continue;
      sz += dist2(zl.data(), &loc[i * d], d);
      sx += dist2(&loc[j * d], &loc[i * d], d);
    }
    if (sz < sx) f.pair_sums = true;

    const double rj = md / (md - 1.0) * std::sqrt(dist2(&loc[j * d], mu.data(), d));
    if (dist2(zl.data(), cj.data(), d) < rj * rj) f.balls = true;

    std::copy(zl.begin(), zl.end(), swapped.begin() + static_cast<std::ptrdiff_t>(j * d));
    if (pair_sum(swapped, m, d) < f_x) f.f_decrease = true;
    std::copy(loc.begin() + static_cast<std::ptrdiff_t>(j * d),
              loc.begin() + static_cast<std::ptrdiff_t>((j + 1) * d),
              swapped.begin() + static_cast<std::ptrdiff_t>(j * d));
  }
  return f;
}

RemovalOutcome removal_choice(const Configuration& x, ConstCoords z, double tie_tolerance) {
  check_query(x, z);
  const std::size_t d = x.dim(), m = x.size();
  const std::vector<double> loc = local_coords(x);
  const std::vector<double> zl = local_point(x, z);
  const std::vector<double> sigma = column_sums(loc, m, d);
  std::vector<double> mu_plus(d);
  for (std::size_t k = 0; k < d; ++k)
    mu_plus[k] = (sigma[k] + zl[k]) / (static_cast<double>(m) + 1.0);

  // Distances of x_0..x_{M-1}, then z.
  double best = -1.0, second = -1.0;
  std::size_t best_index = RemovalOutcome::kIncoming;
  for (std::size_t i = 0; i <= m; ++i) {
    const double* p = i < m ? &loc[i * d] : zl.data();
    const double r = std::sqrt(dist2(p, mu_plus.data(), d));
    if (r > best) {
      second = best;
      best = r;
      best_index = i < m ? i : RemovalOutcome::kIncoming;
    } else if (r > second) {
      second = r;
    }
  }

  double diameter = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    diameter = std::max(diameter, dist2(&loc[i * d], zl.data(), d));
    for (std::size_t j = i + 1; j < m; ++j)
      diameter = std::max(diameter, dist2(&loc[i * d], &loc[j * d], d));
  }
  diameter = std::sqrt(diameter);

  RemovalOutcome out;
  out.index = best_index;
  out.gap = best - second;
  out.near_tie = out.gap < tie_tolerance * diameter;
  return out;
}

double FIdentity::max_relative_discrepancy() const {
  const double s = std::max({scale, std::abs(rhs1), std::abs(rhs2)});
  if (s == 0.0) return 0.0;
  return std::max(std::abs(lhs - rhs1), std::abs(lhs - rhs2)) / s;
}

FIdentity f_identity(const Configuration& x, ConstCoords z, std::size_t j) {
  check_query(x, z);
  const std::size_t d = x.dim(), m = x.size();
  require(j < m, ErrorCode::kInvalidArgument, "removal index out of range");
  const double md = static_cast<double>(m);
  const std::vector<double> loc = local_coords(x);
  const std::vector<double> zl = local_point(x, z);
  const std::vector<double> sigma = column_sums(loc, m, d);

  std::vector<double> swapped(loc);
  std::copy(zl.begin(), zl.end(), swapped.begin() + static_cast<std::ptrdiff_t>(j * d));
  const double f_before = pair_sum(loc, m, d);
  const double f_after = pair_sum(swapped, m, d);

  std::vector<double> mu_plus(d), cj(d);
  for (std::size_t k = 0; k < d; ++k) {
    mu_plus[k] = (sigma[k] + zl[k]) / (md + 1.0);
    cj[k] = (sigma[k] - loc[j * d + k]) / (md - 1.0);
  }
  const double* xj = &loc[j * d];
  FIdentity out;
  out.lhs = f_before - f_after;
  out.rhs1 = (md + 1.0) * (dist2(xj, mu_plus.data(), d) - dist2(zl.data(), mu_plus.data(), d));
  out.rhs2 = (md - 1.0) * (dist2(xj, cj.data(), d) - dist2(zl.data(), cj.data(), d));
  out.scale = std::max({std::abs(out.lhs), f_before, f_after});
  return out;
}

Point sample_keep(Rng& rng, const Configuration& x, const ConvexBody& body,
                  std::int64_t max_attempts) {
  return sample_keep_counted(rng, x, body, max_attempts).point;
}

KeepDraw sample_keep_counted(Rng& rng, const Configuration& x, const ConvexBody& body,
                             std::int64_t max_attempts) {
  require(max_attempts > 0, ErrorCode::kInvalidArgument, "max_attempts must be positive");
  const KeepRegion region(x, body);
  KeepDraw out{Point(x.dim()), 0};
  out.proposals = region.sample_into(rng, max_attempts, out.point.coords());
  return out;
}

McEstimate keep_volume(Rng& rng, const Configuration& x, const ConvexBody& body,
                       std::int64_t n_samples) {
  require(n_samples > 0, ErrorCode::kInvalidArgument, "n_samples must be positive");
  const KeepRegion region(x, body);
  const Ball& outer = region.outer();
  Point z(x.dim());
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    sample_uniform_ball(rng, outer.center, outer.radius, z.coords());
    if (region.contains(z)) ++hits;
  }
  const double vol = unit_ball_volume(static_cast<int>(x.dim())) *
                     std::pow(outer.radius, static_cast<double>(x.dim()));
  const double p = static_cast<double>(hits) / static_cast<double>(n_samples);
  return {vol * p, vol * std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples))};
}

}  // namespace jante
