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

#include "jante/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "jante/errors.hpp"

namespace jante {

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r;
  r.n = static_cast<std::int64_t>(xs.size());
  if (xs.empty()) return r;
  // Welford; stable for long runs of nearly equal increments.
  double mean = 0.0, m2 = 0.0;
  std::int64_t k = 0;
  for (double x : xs) {
    ++k;
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  r.mean = mean;
  if (k > 1) r.se = std::sqrt(m2 / static_cast<double>(k - 1) / static_cast<double>(k));
  return r;
}

double chi_square_sf(double statistic, double dof) {
  require(dof > 0.0, ErrorCode::kInvalidArgument, "chi-square needs positive dof");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected, int fitted_parameters) {
  require(observed.size() == expected.size() && observed.size() >= 2,
          ErrorCode::kInvalidArgument, "chi-square needs matching cell vectors");
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    require(expected[i] > 0.0, ErrorCode::kInvalidArgument, "expected counts must be positive");
    const double t = observed[i] - expected[i];
    r.statistic += t * t / expected[i];
  }
  r.dof = static_cast<int>(observed.size()) - 1 - fitted_parameters;
  require(r.dof >= 1, ErrorCode::kInvalidArgument, "too few cells for chi-square");
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorCode::kInvalidArgument, "KS needs two samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
  return r;
}

}  // namespace jante
