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

#ifndef GBS_SAMPLERS_H
#define GBS_SAMPLERS_H

#include <cstdint>
#include <functional>
#include <string>

#include "gbs/experiment.h"
#include "gbs/gaussian_state.h"
#include "gbs/kernels.h"
#include "gbs/mocks.h"
#include "gbs/probability.h"
#include "gbs/sample_set.h"

namespace gbs {

/// Inverse-CDF sampling from the full click distribution; m <= max_modes.
SampleSet enumerate_sampler(const GaussianState &state, int64_t n, uint64_t seed, const SamplerOptions &opts = {},
                            int max_modes = 14);

struct ChainRuleDiagnostics {
  uint64_t torontonian_evaluations = 0;
  uint64_t memo_hits = 0;
  /// Extremes of the click conditionals before clamping to [0, 1].
  double min_conditional = 1;
  double max_conditional = 0;
  int max_clicks = 0;
};

/// Mode-by-mode sampling: the click conditional for mode t+1 is 1 - P(prefix, 0) / P(prefix),
/// with marginals taken on the state reduced to the first t+1 modes.
SampleSet chain_rule_sampler(const GaussianState &state, int64_t n, uint64_t seed, const SamplerOptions &opts = {},
                             const KernelOptions &kernel = {}, ChainRuleDiagnostics *diagnostics = nullptr);

struct McmcOptions {
  int burn_in = 1000;
  int thinning = 100;
};

struct McmcDiagnostics {
  uint64_t proposals = 0;
  uint64_t accepted = 0;
  /// Target evaluations requested by the chain, one per proposal, counted as a fresh
  /// Torontonian each; `distinct_evaluations` is what the cache actually computed.
  uint64_t target_evaluations = 0;
  uint64_t distinct_evaluations = 0;
  double acceptance_rate() const { return proposals ? static_cast<double>(accepted) / proposals : 0.0; }
};

struct IndependenceProposal {
  std::function<ClickPattern(Rng &)> draw;
  std::function<double(const ClickPattern &)> pmf;
};

/// Independence Metropolis-Hastings. Accepts s' with probability min(1, p(s')q(s) / (p(s)q(s'))),
/// evaluated without division so zero probabilities reject.
SampleSet mcmc_chain_sampler(int modes, const std::function<double(const ClickPattern &)> &target,
                             const IndependenceProposal &proposal, int64_t n, uint64_t seed,
                             const McmcOptions &mcmc = {}, const SamplerOptions &opts = {},
                             McmcDiagnostics *diagnostics = nullptr);

/// Ideal target from the spec's Gaussian state, proposal from the distinguishable model.
SampleSet mcmc_sampler(const ExperimentSpec &spec, int64_t n, uint64_t seed, const McmcOptions &mcmc = {},
                       const SamplerOptions &opts = {}, const KernelOptions &kernel = {},
                       McmcDiagnostics *diagnostics = nullptr);

}  // namespace gbs

#endif
