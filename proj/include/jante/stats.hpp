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

#ifndef JANTE_STATS_HPP_
#define JANTE_STATS_HPP_

#include <cstdint>
#include <vector>

namespace jante {

struct MeanSe {
  std::int64_t n = 0;
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(n)
};

MeanSe mean_se(const std::vector<double>& xs);

// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double dof);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson goodness of fit; dof = cells - 1 - fitted_parameters.
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected, int fitted_parameters = 0);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Survival function of the Kolmogorov distribution.
double kolmogorov_sf(double lambda);

}  // namespace jante

#endif  // JANTE_STATS_HPP_
