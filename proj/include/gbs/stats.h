// Copyright 2026 The gbslab Authors
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

#ifndef GBS_STATS_H
#define GBS_STATS_H

#include <functional>
#include <span>
#include <vector>

namespace gbs {

struct KsResult {
  double statistic = 0;  // sup |F_1 - F_2|
  double p_value = 1;
};

/// Kolmogorov survival function Q(lambda) = 2 sum_j (-1)^(j-1) exp(-2 j^2 lambda^2).
double kolmogorov_survival(double lambda);

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)> &cdf);

/// Two-sample Kolmogorov-Smirnov test.
KsResult ks_test(std::vector<double> a, std::vector<double> b);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double dof);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double slope_stderr = 0;
  int points = 0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Two-sided Student t quantile at probability 1 - alpha/2.
double student_t_quantile(double dof, double alpha);

double median(std::vector<double> values);

}  // namespace gbs

#endif
