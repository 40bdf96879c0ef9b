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

#include "gbs/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gbs/common.h"
#include "gbs/probability.h"
#include "gbs/rng.h"
#include "gbs/stats.h"

namespace gbs {

namespace {

constexpr int kAnchorClicksLo = 30;
constexpr double kAnchorSecondsLo = 0.03;
constexpr int kAnchorClicksHi = 50;
constexpr double kAnchorSecondsHi = 2 * 86400.0;

constexpr int kPublishedPeakClicks = 43;
constexpr double kPublishedPeakCounts = 3097810;
constexpr int kPublishedMaxClicks = 76;

ClickPattern random_pattern(int modes, int k, Rng &rng) {
  std::vector<int> order(modes);
  std::iota(order.begin(), order.end(), 0);
  std::string bits(modes, '0');
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.below(modes - i));
    std::swap(order[i], order[j]);
    bits[order[i]] = '1';
  }
  return ClickPattern::from_string(bits);
}

}  // namespace

std::vector<TimingRecord> time_torontonian(int k_lo, int k_hi, const ExperimentSpec &spec, uint64_t seed,
                                           const BenchOptions &opts) {
  if (k_lo < 1 || k_hi < k_lo) {
    throw std::invalid_argument("bench needs 1 <= k_lo <= k_hi");
  }
  if (opts.repetitions < 3) {
    throw std::invalid_argument("bench needs at least 3 repetitions");
  }
  if (k_hi > opts.kernel.max_clicks) {
    std::ostringstream msg;
    msg << "bench up to " << k_hi << " clicks exceeds the kernel limit of " << opts.kernel.max_clicks
        << " (roughly " << torontonian_cost_seconds(k_hi) << " s per Torontonian)";
    throw ScaleError(msg.str());
  }
  GaussianState state = build(spec);
  if (k_hi > state.modes()) {
    throw std::invalid_argument("bench click count exceeds the number of modes");
  }
  ClickProbability probability(state, opts.kernel);
  Rng root(seed, 0x62656e6368);
  std::vector<TimingRecord> records;
  for (int k = k_lo; k <= k_hi; ++k) {
    Rng rng = root.split(static_cast<uint64_t>(k));
    CMatrix o = probability.kernel_matrix(random_pattern(state.modes(), k, rng));
    TimingRecord rec;
    rec.k = k;
    rec.repetitions = opts.repetitions;
    std::vector<double> times;
    for (int r = 0; r < opts.repetitions; ++r) {
      auto start = std::chrono::steady_clock::now();
      TorontonianResult t = torontonian(o, opts.kernel);
      auto stop = std::chrono::steady_clock::now();
      times.push_back(std::max(std::chrono::duration<double>(stop - start).count(), 1e-9));
      rec.value = t.value;
      rec.error_estimate = t.error_estimate;
    }
    rec.wall_seconds = median(times);
    rec.min_seconds = *std::min_element(times.begin(), times.end());
    rec.max_seconds = *std::max_element(times.begin(), times.end());
    records.push_back(rec);
  }
  return records;
}

Table timing_table(const std::vector<TimingRecord> &records) {
  Table t;
  t.header = {"k", "median_seconds", "min", "max", "value", "error_estimate"};
  for (const TimingRecord &r : records) {
    t.add_row({std::to_string(r.k), format_number(r.wall_seconds), format_number(r.min_seconds),
               format_number(r.max_seconds), format_number(r.value), format_number(r.error_estimate)});
  }
  return t;
}

double ScalingFit::ratio() const { return std::exp2(log2_slope); }

std::pair<double, double> ScalingFit::ratio_band(double confidence) const {
  if (points <= 2 || slope_stderr == 0) {
    return {ratio(), ratio()};
  }
  double half = student_t_quantile(points - 2, 1 - confidence) * slope_stderr;
  return {std::exp2(log2_slope - half), std::exp2(log2_slope + half)};
}

double ScalingFit::seconds(int k) const { return std::exp2(log2_slope * k + intercept); }

ScalingFit fit_scaling(const std::vector<TimingRecord> &records) {
  if (records.size() < 5) {
    throw std::invalid_argument("scaling fit needs at least 5 timing records");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const TimingRecord &r : records) {
    if (!(r.wall_seconds > 0)) {
      throw std::invalid_argument("timing records need positive wall times");
    }
    x.push_back(r.k);
    y.push_back(std::log2(r.wall_seconds));
  }
  LinearFit line = fit_line(x, y);
  ScalingFit fit;
  fit.log2_slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.slope_stderr = line.slope_stderr;
  fit.points = line.points;
  fit.k_min = static_cast<int>(*std::min_element(x.begin(), x.end()));
  fit.k_max = static_cast<int>(*std::max_element(x.begin(), x.end()));
  fit.flat = std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); });
  if (fit.flat) {
    fit.log2_slope = 0;
    fit.slope_stderr = 0;
    warn("scaling fit: all times are equal, r^2 is undefined");
  }
  return fit;
}

ScalingFit published_anchor_model() {
  ScalingFit fit;
  fit.log2_slope = std::log2(kAnchorSecondsHi / kAnchorSecondsLo) / (kAnchorClicksHi - kAnchorClicksLo);
  fit.intercept = std::log2(kAnchorSecondsLo) - fit.log2_slope * kAnchorClicksLo;
  fit.r_squared = 1;
  fit.points = 2;
  fit.k_min = kAnchorClicksLo;
  fit.k_max = kAnchorClicksHi;
  return fit;
}

int CostEstimate::peak() const {
  if (rows.empty()) {
    return -1;
  }
  auto best = std::max_element(rows.begin(), rows.end(),
                               [](const CostRow &a, const CostRow &b) { return a.cost_seconds < b.cost_seconds; });
  return best->n;
}

Table CostEstimate::to_table() const {
  Table t;
  t.meta = {{"total_seconds", format_number(total_seconds)}, {"total_err", format_number(total_err)}};
  t.header = {"N", "counts", "t_model_seconds", "cost_seconds", "cost_err", "label"};
  for (const CostRow &r : rows) {
    t.add_row({std::to_string(r.n), format_number(r.counts), format_number(r.t_model_seconds),
               format_number(r.cost_seconds), format_number(r.cost_err), r.extrapolated ? "EXTRAPOLATED" : "MEASURED"});
  }
  return t;
}

CostEstimate estimate_classical_cost(const std::vector<double> &counts, const ScalingFit &model,
                                     double torontonians_per_sample) {
  CostEstimate est;
  double err2 = 0;
  for (size_t n = 0; n < counts.size(); ++n) {
    if (counts[n] < 0) {
      throw std::invalid_argument("click histogram counts must be non-negative");
    }
    if (counts[n] == 0) {
      continue;
    }
    CostRow row;
    row.n = static_cast<int>(n);
    row.counts = counts[n];
    row.t_model_seconds = model.seconds(row.n);
    row.cost_seconds = counts[n] * torontonians_per_sample * row.t_model_seconds;
    row.cost_err = std::sqrt(counts[n]) * torontonians_per_sample * row.t_model_seconds;
    row.extrapolated = model.extrapolated(row.n);
    est.total_seconds += row.cost_seconds;
    err2 += row.cost_err * row.cost_err;
    est.rows.push_back(row);
  }
  est.total_err = std::sqrt(err2);
  return est;
}

std::vector<double> published_click_histogram() {
  double tail = kPublishedMaxClicks - kPublishedPeakClicks;
  double sigma = tail / std::sqrt(2 * std::log(kPublishedPeakCounts));
  std::vector<double> counts(kPublishedMaxClicks + 1);
  for (int n = 0; n <= kPublishedMaxClicks; ++n) {
    double z = (n - kPublishedPeakClicks) / sigma;
    counts[n] = kPublishedPeakCounts * std::exp(-0.5 * z * z);
  }
  return counts;
}

}  // namespace gbs
