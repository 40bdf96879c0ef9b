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

#ifndef GBS_BENCH_H
#define GBS_BENCH_H

#include <cstdint>
#include <utility>
#include <vector>

#include "gbs/experiment.h"
#include "gbs/kernels.h"
#include "gbs/table.h"

namespace gbs {

struct TimingRecord {
  int k = 0;
  /// Median wall time over the repetitions.
  double wall_seconds = 0;
  double min_seconds = 0;
  double max_seconds = 0;
  /// Torontonian of the timed kernel matrix.
  double value = 0;
  double error_estimate = 0;
  int repetitions = 0;
};

struct BenchOptions {
  int repetitions = 3;
  KernelOptions kernel;
};

/// Times torontonian() on a random k-click kernel matrix of the state built from
/// `spec`, for every k in [k_lo, k_hi]. The pattern for each k comes from its own
/// stream of `seed`, so a record does not depend on the rest of the range. Runs are
/// strictly sequential. Throws ScaleError when k_hi exceeds the kernel limit.
std::vector<TimingRecord> time_torontonian(int k_lo, int k_hi, const ExperimentSpec &spec, uint64_t seed,
                                           const BenchOptions &opts = {});

/// bench.csv layout: k, median_seconds, min, max, value, error_estimate.
Table timing_table(const std::vector<TimingRecord> &records);

/// Exponential model log2 t(k) = log2_slope * k + intercept.
struct ScalingFit {
  double log2_slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double slope_stderr = 0;
  int points = 0;
  /// Range of k the model was fitted on.
  int k_min = 0;
  int k_max = 0;
  /// Set when all times are equal, so r_squared carries no information.
  bool flat = false;

  /// Time multiplier per additional click.
  double ratio() const;
  /// Two-sided Student t confidence interval on ratio().
  std::pair<double, double> ratio_band(double confidence = 0.95) const;
  double seconds(int k) const;
  bool extrapolated(int k) const { return k < k_min || k > k_max; }
};

/// Least squares on log2(wall_seconds) against k. Needs at least five records
/// spanning two or more distinct k.
ScalingFit fit_scaling(const std::vector<TimingRecord> &records);

/// Model through the published supercomputer anchors: 0.03 s at 30 clicks and two
/// days at 50 clicks.
ScalingFit published_anchor_model();

struct CostRow {
  int n = 0;
  double counts = 0;
  double t_model_seconds = 0;
  double cost_seconds = 0;
  /// Poisson counting error, sqrt(counts) in place of counts.
  double cost_err = 0;
  bool extrapolated = false;
};

struct CostEstimate {
  std::vector<CostRow> rows;
  /// Sum of cost_seconds in row order.
  double total_seconds = 0;
  /// Row errors added in quadrature.
  double total_err = 0;

  /// Click number with the largest cost; -1 when there are no rows.
  int peak() const;
  /// cost.csv layout: N, counts, t_model_seconds, cost_seconds, cost_err, label.
  Table to_table() const;
};

/// cost(N) = counts[N] * torontonians_per_sample * t_model(N) for every click
/// number N with nonzero counts.
CostEstimate estimate_classical_cost(const std::vector<double> &counts, const ScalingFit &model,
                                     double torontonians_per_sample = 100);

/// Gaussian click histogram with the published peak of 3,097,810 events at 43
/// clicks and its width set so the 76-click bin holds one event. Indexed 0..76.
std::vector<double> published_click_histogram();

}  // namespace gbs

#endif  // GBS_BENCH_H
