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

#ifndef GBS_MOCKS_H
#define GBS_MOCKS_H

// Classical null-hypothesis samplers. This header and mocks.cc only see the experiment
// description; they are built into a library that does not contain the probability engine.

#include <cstdint>
#include <span>
#include <vector>

#include "gbs/click_pattern.h"
#include "gbs/experiment.h"
#include "gbs/rng.h"
#include "gbs/sample_set.h"

namespace gbs {

/// Squeezed sources with their photons made fully distinguishable: each photon walks the
/// interferometer on its own, so only single-photon transition probabilities matter.
class DistinguishableModel {
 public:
  explicit DistinguishableModel(const ExperimentSpec &spec);

  int modes() const { return modes_; }
  ClickPattern sample(Rng &rng) const;
  /// Probability that every listed detector stays silent.
  double silent(std::span<const int> detectors) const;
  /// Exact probability of a click pattern, by inclusion-exclusion over its clicked set.
  double pmf(const ClickPattern &pattern) const;
  /// Expected number of clicks.
  double mean_clicks() const;

 private:
  struct Source {
    SourceKind kind;
    std::vector<int> inputs;
    double r;
    double tanh2;
    double mean_photons;
  };
  double silent_from_weights(const std::vector<double> &w) const;
  int draw_photon_number(const Source &src, Rng &rng) const;

  int modes_;
  std::vector<Source> sources_;
  // detect_(j, i): probability that a photon entering input i is detected at output j.
  Eigen::MatrixXd detect_;
  // Per input, cumulative routing distribution over outputs and the survival probabilities.
  std::vector<std::vector<double>> route_cdf_;
  std::vector<double> eta_in_;
  std::vector<double> eta_out_;
};

int64_t draw_geometric(double ratio, Rng &rng);

SampleSet distinguishable_mock_sampler(const ExperimentSpec &spec, int64_t n, uint64_t seed,
                                       const SamplerOptions &opts = {});

/// Thermal sources of equal mean photon number sampled as a Gaussian mixture of coherent fields.
SampleSet thermal_mock_sampler(const ExperimentSpec &spec, int64_t n, uint64_t seed, const SamplerOptions &opts = {});

/// Uniform over the C(m, n_clicks) patterns with exactly n_clicks clicks.
SampleSet uniform_sampler(int modes, int n_clicks, int64_t n, uint64_t seed, const SamplerOptions &opts = {});

/// Uniform over all patterns whose click number lies in [lo, hi].
SampleSet uniform_band_sampler(int modes, int lo, int hi, int64_t n, uint64_t seed, const SamplerOptions &opts = {});

}  // namespace gbs

#endif
