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

#ifndef GBS_VALIDATION_H
#define GBS_VALIDATION_H

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gbs/experiment.h"
#include "gbs/gaussian_state.h"
#include "gbs/kernels.h"
#include "gbs/probability.h"
#include "gbs/sample_set.h"
#include "gbs/stats.h"
#include "gbs/table.h"

namespace gbs {

using ProbabilityFn = std::function<double(const ClickPattern &)>;

struct FidelityTvd {
  double fidelity = 0;
  double tvd = 0;
};

/// F = sum sqrt(p q), D = sum |p - q| / 2. Inputs off normalization by more than 1e-6
/// are renormalized with a warning.
FidelityTvd fidelity_tvd(std::span<const double> p, std::span<const double> q);

/// Mean TVD between p and the empirical distribution of n draws from p,
/// sum_i sqrt(p_i (1 - p_i) / (2 pi n)) to leading order.
double expected_sampling_tvd(std::span<const double> p, int64_t n);

struct ChiSquareResult {
  double statistic = 0;
  double dof = 0;
  double p_value = 1;
};

/// Goodness of fit of observed counts to probabilities p. Adjacent outcomes (in index
/// order, after sorting by p) are pooled until each cell expects at least min_expected.
ChiSquareResult chi_square_gof(std::span<const int64_t> counts, std::span<const double> p, double min_expected = 5);

/// Two-sample homogeneity test on binned counts; adjacent bins pooled until each cell holds
/// at least min_count observations in total.
ChiSquareResult chi_square_homogeneity(std::span<const int64_t> a, std::span<const int64_t> b, double min_count = 10);

/// Plug-in C_ij = <P_i P_j> - <P_i><P_j> from click frequencies.
double two_point_empirical(const SampleSet &samples, int i, int j);
/// Delta-method standard error of two_point_empirical.
double two_point_stderr(const SampleSet &samples, int i, int j);

/// C_ij for all pairs i < j in row-major order.
struct PairCorrelations {
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> values;
  std::vector<double> stderrs;  // zero for exact values
};
PairCorrelations pair_correlations(const SampleSet &samples);
PairCorrelations pair_correlations(const GaussianState &state);
/// Exact correlations of any model given its silent-set probability.
PairCorrelations pair_correlations(int modes, const std::function<double(std::span<const int>)> &silent);

struct Histogram {
  std::vector<double> edges;
  std::vector<int64_t> counts;
  int64_t total() const;
};

/// Bins values on the given edges; values outside the range land in the end bins.
Histogram make_histogram(std::span<const double> values, std::span<const double> edges);
/// `bins` equal-width bins spanning every series; a zero-width range is widened to +-1e-3.
std::vector<double> common_edges(const std::vector<std::span<const double>> &series, int bins);

struct CorrelationComparison {
  double chi_square = 0;
  int pairs = 0;
  double p_value = 1;
  /// Normal-equivalent deviation of the chi-square statistic (Wilson-Hilferty), so very
  /// large separations stay finite.
  double sigma = 0;
  double histogram_tvd = 0;
};
/// Pairwise comparison sum (a_ij - b_ij)^2 / (s_a^2 + s_b^2) over all pairs.
// bins <= 0 selects Sturges' rule on the number of pairs.
CorrelationComparison compare_correlations(const PairCorrelations &a, const PairCorrelations &b, int bins = 0);

struct CorrelationHistogram {
  std::vector<std::string> names;
  std::vector<double> edges;
  std::vector<std::vector<int64_t>> counts;
  Table to_table() const;
};
CorrelationHistogram correlation_histogram(const std::vector<std::pair<std::string, PairCorrelations>> &series,
                                           int bins = 30);

/// R / (1 + R) for log R = log_odds, without overflow.
double hog_confidence(double log_odds);

struct HogOptions {
  int band_lo = 0;
  int band_hi = std::numeric_limits<int>::max();
  /// log of each model's total probability inside the band; zero leaves the odds unnormalized.
  double log_mass_ideal = 0;
  double log_mass_alt = 0;
  /// p_ideal over a reference batch of ideal samples; its median defines "heavy".
  std::vector<double> reference_ideal_probabilities;
};

struct HogResult {
  std::vector<double> log_odds;
  std::vector<double> confidence;
  double heavy_fraction = std::numeric_limits<double>::quiet_NaN();
  double heavy_threshold = std::numeric_limits<double>::quiet_NaN();
  /// Samples whose alternative probability was zero and got floored.
  int64_t floored = 0;
  double final_confidence() const { return confidence.empty() ? 0.5 : confidence.back(); }
};

/// Cumulative Bayesian odds of "ideal" over "alt" plus the heavy-output fraction.
HogResult hog_test(const SampleSet &samples, const ProbabilityFn &p_ideal, const ProbabilityFn &p_alt,
                   const HogOptions &opts = {});

/// Exact ideal samples restricted to a click band: exact conditional enumeration for
/// m <= 14, chain-rule sampling with rejection above.
SampleSet ideal_band_samples(const GaussianState &state, int lo, int hi, int64_t n, uint64_t seed,
                             const KernelOptions &kernel = {});

struct ProbabilityCurve {
  std::vector<double> edges;
  std::vector<double> reference_points;  // log10 p_ideal of ideal reference patterns
  std::vector<double> uniform_points;    // log10 p_ideal of uniform patterns
  std::vector<double> sample_points;     // log10 p_ideal of the samples under test
  Histogram reference;
  Histogram uniform;
  Histogram samples;
  KsResult sample_vs_reference;
  KsResult uniform_vs_reference;
  KsResult sample_vs_uniform;
  ChiSquareResult sample_chi_square;
  /// (mean reference - mean uniform) / sd(reference), in log10 units.
  double uniform_separation = 0;
  Table to_table() const;
};

ProbabilityCurve probability_curve(const ProbabilityFn &p_ideal, const SampleSet &reference_ideal,
                                   const SampleSet &reference_uniform, const SampleSet &samples, int bins = 50);
/// Builds both reference batches (n_reference each) inside the band [lo, hi].
ProbabilityCurve probability_curve(const GaussianState &state, const SampleSet &samples, int lo, int hi,
                                   int64_t n_reference, uint64_t seed, int bins = 50, const KernelOptions &kernel = {});

struct ClickHistogramComparison {
  std::vector<std::string> names;
  std::vector<std::vector<int64_t>> counts;
  std::vector<int> peaks;
  std::vector<double> means;
  std::vector<std::vector<double>> tvd;
  std::vector<std::vector<double>> shape_p_value;
  bool peak_separated(size_t a, size_t b) const { return std::abs(peaks[a] - peaks[b]) >= 1; }
  bool shape_separated(size_t a, size_t b, double alpha = 0.01) const { return shape_p_value[a][b] < alpha; }
  Table to_table() const;
};

ClickHistogramComparison click_histogram_compare(const std::vector<std::pair<std::string, const SampleSet *>> &sets);

/// Expected number of clicks, sum over modes of 1 - P(mode silent).
double expected_clicks(const GaussianState &state);

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<Verdict> verdicts;
  Table cij_hist;
  Table click_hist;
  Table hog_trajectory;
  Table prob_curve;

  double scalar(const std::string &name) const;
  const Verdict *verdict(const std::string &name) const;
  bool all_pass() const;
  Table report_table() const;
  /// Writes report.csv, cij_hist.csv, click_hist.csv, hog_trajectory.csv and prob_curve.csv.
  void write(const std::string &dir, const std::vector<std::pair<std::string, std::string>> &meta) const;
};

struct ValidationOptions {
  int band_lo = 6;
  int band_hi = 10;
  int64_t n_reference = 20000;
  int curve_bins = 50;
  int cij_bins = 30;
  int hog_samples = 200;
  uint64_t seed = 0;
  int max_exact_modes = 14;
  KernelOptions kernel;
};

/// Runs every comparison against the spec's ideal model, treating `samples` as the data
/// set under test. `overlays` only contribute extra series to the histograms.
ValidationReport validate_samples(const ExperimentSpec &spec, const SampleSet &samples,
                                  const std::vector<const SampleSet *> &overlays, const ValidationOptions &opts);

}  // namespace gbs

#endif
