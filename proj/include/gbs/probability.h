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

#ifndef GBS_PROBABILITY_H
#define GBS_PROBABILITY_H

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gbs/click_pattern.h"
#include "gbs/common.h"
#include "gbs/experiment.h"
#include "gbs/gaussian_state.h"
#include "gbs/kernels.h"

namespace gbs {

/// Photon-number-resolved outcome.
using FockPattern = std::vector<int>;

struct ProbabilityResult {
  double value = 0;
  double error_estimate = 0;
};

/// Threshold-detector probabilities of one state, with Q^{-1} and det Q cached:
///
///     p(S) = Tor(O_S) / sqrt(det Q),  Q = sigma + I/2,  O = I - Q^{-1}
///
/// where O_S keeps rows and columns (i, i+m) for the clicked modes i.
class ClickProbability {
 public:
  explicit ClickProbability(const GaussianState &state, KernelOptions opts = {});

  int modes() const { return modes_; }
  /// Throws ScaleError (with the pattern in the message) when the kernel refuses,
  /// NumericalError when the value is negative beyond its error estimate.
  ProbabilityResult evaluate(const ClickPattern &pattern) const;
  double operator()(const ClickPattern &pattern) const { return evaluate(pattern).value; }
  /// Kernel matrix O_S of a pattern.
  CMatrix kernel_matrix(const ClickPattern &pattern) const;
  const CMatrix &kernel() const { return o_; }

 private:
  int modes_;
  KernelOptions opts_;
  CMatrix o_;
  double root_det_q_;
};

double click_probability(const GaussianState &state, const ClickPattern &pattern, const KernelOptions &opts = {});

/// Probability that every mode in `subset` is silent, others unconstrained.
double silent_probability(const GaussianState &state, std::span<const int> subset);

/// C_ij = <Pi_i Pi_j> - <Pi_i><Pi_j> for click projectors Pi.
double two_point_theory(const GaussianState &state, int i, int j);

/// Click probability of every pattern, indexed by ClickPattern::index().
std::vector<double> full_distribution(const GaussianState &state, int max_modes = 14);

/// Photon-number probability from the Hafnian of A = X (I - Q^{-1}) with rows and
/// columns repeated by occupation. Pure states use the m x m block B (|Haf B_n|^2),
/// mixed states the full 2N x 2N matrix. Throws ScaleError when the Hafnian would
/// exceed `max_hafnian_dim`.
double fock_probability(const GaussianState &state, const FockPattern &pattern, int max_hafnian_dim = 16);

struct FockOracleResult {
  double probability = 0;
  /// Input probability mass above the photon truncation (not represented).
  double truncation_error = 0;
};

/// Independent Fock-space route for lossless SMSS/TMSS/VACUUM devices with at most
/// four modes: expand the sources in photon number up to `truncation`, send every
/// term through the interferometer with permanent transition amplitudes, square.
FockOracleResult fock_oracle(const ExperimentSpec &spec, const FockPattern &pattern, int truncation = 12);

/// Thresholds each occupation pattern and sums probabilities per click pattern.
std::map<ClickPattern, double> click_from_fock(const std::vector<std::pair<FockPattern, double>> &fock);

/// Every occupation pattern over `modes` modes with at most `max_photons` photons.
std::vector<FockPattern> fock_patterns_up_to(int modes, int max_photons);

/// sum_{k <= n_max} C(m, k), exactly.
boost::multiprecision::cpp_int state_space_dimension(int modes, int n_max);

}  // namespace gbs

#endif
