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

#include "gbs/samplers.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace gbs {

namespace {

std::string fixed(double x, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << x;
  return out.str();
}

}  // namespace

SampleSet enumerate_sampler(const GaussianState &state, int64_t n, uint64_t seed, const SamplerOptions &opts,
                            int max_modes) {
  std::vector<double> p = full_distribution(state, max_modes);
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  double total = cdf.back();
  int m = state.modes();
  return run_streams(m, ModelTag::kIdealEnum, n, seed, opts,
                     [&](Rng &rng, int64_t count, int, std::vector<ClickPattern> &out) {
                       for (int64_t s = 0; s < count; ++s) {
                         double u = rng.uniform() * total;
                         size_t idx = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
                         idx = std::min(idx, cdf.size() - 1);
                         // Never land on a zero-probability outcome through rounding.
                         while (p[idx] <= 0 && idx > 0) {
                           --idx;
                         }
                         out.push_back(ClickPattern::from_index(idx, m));
                       }
                     });
}

SampleSet chain_rule_sampler(const GaussianState &state, int64_t n, uint64_t seed, const SamplerOptions &opts,
                             const KernelOptions &kernel, ChainRuleDiagnostics *diagnostics) {
  int m = state.modes();
  // engines[t] gives marginals of the first t+1 modes.
  std::vector<ClickProbability> engines;
  engines.reserve(m);
  for (int t = 0; t < m; ++t) {
    std::vector<int> first(t + 1);
    std::iota(first.begin(), first.end(), 0);
    engines.emplace_back(t + 1 == m ? state : state.reduce(first), kernel);
  }
  std::vector<ChainRuleDiagnostics> per_chain(opts.chains);
  SampleSet out = run_streams(
      m, ModelTag::kIdealChain, n, seed, opts, [&](Rng &rng, int64_t count, int chain, std::vector<ClickPattern> &sink) {
        ChainRuleDiagnostics &diag = per_chain[chain];
        std::unordered_map<std::string, double> memo;
        std::string prefix;
        for (int64_t s = 0; s < count; ++s) {
          prefix.clear();
          double p_prefix = 1;
          int clicks = 0;
          for (int t = 0; t < m; ++t) {
            prefix.push_back('0');
            double p_silent;
            auto hit = memo.find(prefix);
            if (hit != memo.end()) {
              p_silent = hit->second;
              ++diag.memo_hits;
            } else {
              try {
                p_silent = engines[t].evaluate(ClickPattern::from_string(prefix)).value;
              } catch (const ScaleError &e) {
                throw ScaleError("chain-rule sample " + std::to_string(s) + " of chain " + std::to_string(chain) +
                                 " aborted at mode " + std::to_string(t) + " after " + std::to_string(clicks) +
                                 " clicks: " + e.what());
              }
              ++diag.torontonian_evaluations;
              if (memo.size() > (size_t{1} << 20)) {
                memo.clear();
              }
              memo.emplace(prefix, p_silent);
            }
            double cond = p_prefix > 0 ? 1 - p_silent / p_prefix : 0.0;
            diag.min_conditional = std::min(diag.min_conditional, cond);
            diag.max_conditional = std::max(diag.max_conditional, cond);
            if (cond < -1e-8 || cond > 1 + 1e-8) {
              throw NumericalError("chain-rule conditional " + std::to_string(cond) + " outside [0, 1] at mode " +
                                   std::to_string(t) + " of sample " + std::to_string(s));
            }
            if (rng.uniform() < cond) {
              prefix.back() = '1';
              ++clicks;
              double p_click = p_prefix - p_silent;
              if (p_click < 1e-6 * p_prefix) {
                // Recompute directly rather than trusting a cancelling difference.
                auto again = memo.find(prefix);
                if (again != memo.end()) {
                  p_click = again->second;
                } else {
                  p_click = engines[t].evaluate(ClickPattern::from_string(prefix)).value;
                  ++diag.torontonian_evaluations;
                  memo.emplace(prefix, p_click);
                }
              }
              p_prefix = p_click;
            } else {
              p_prefix = p_silent;
            }
          }
          diag.max_clicks = std::max(diag.max_clicks, clicks);
          sink.push_back(ClickPattern::from_string(prefix));
        }
      });
  ChainRuleDiagnostics total;
  for (const ChainRuleDiagnostics &d : per_chain) {
    total.torontonian_evaluations += d.torontonian_evaluations;
    total.memo_hits += d.memo_hits;
    total.min_conditional = std::min(total.min_conditional, d.min_conditional);
    total.max_conditional = std::max(total.max_conditional, d.max_conditional);
    total.max_clicks = std::max(total.max_clicks, d.max_clicks);
  }
  if (diagnostics != nullptr) {
    *diagnostics = total;
  }
  return out;
}

SampleSet mcmc_chain_sampler(int modes, const std::function<double(const ClickPattern &)> &target,
                             const IndependenceProposal &proposal, int64_t n, uint64_t seed, const McmcOptions &mcmc,
                             const SamplerOptions &opts, McmcDiagnostics *diagnostics) {
  if (mcmc.burn_in < 0 || mcmc.thinning < 1) {
    throw std::invalid_argument("mcmc needs burn_in >= 0 and thinning >= 1");
  }
  std::vector<McmcDiagnostics> per_chain(opts.chains);
  SampleSet out = run_streams(
      modes, ModelTag::kIdealMcmc, n, seed, opts,
      [&](Rng &rng, int64_t count, int chain, std::vector<ClickPattern> &sink) {
        if (count == 0) {
          return;
        }
        McmcDiagnostics &diag = per_chain[chain];
        std::map<ClickPattern, double> cache;
        auto p_of = [&](const ClickPattern &s) {
          ++diag.target_evaluations;
          auto it = cache.find(s);
          if (it != cache.end()) {
            return it->second;
          }
          ++diag.distinct_evaluations;
          double v = target(s);
          cache.emplace(s, v);
          return v;
        };
        ClickPattern current = proposal.draw(rng);
        double p_cur = p_of(current);
        double q_cur = proposal.pmf(current);
        for (int attempt = 0; p_cur <= 0 || q_cur <= 0; ++attempt) {
          if (attempt > 100000) {
            throw NumericalError("mcmc found no starting state with positive target probability");
          }
          current = proposal.draw(rng);
          p_cur = p_of(current);
          q_cur = proposal.pmf(current);
        }
        auto step = [&]() {
          ClickPattern next = proposal.draw(rng);
          double q_next = proposal.pmf(next);
          double p_next = p_of(next);
          ++diag.proposals;
          double u = rng.uniform();
          if (q_next > 0 && p_next > 0 && u * p_cur * q_next < p_next * q_cur) {
            current = std::move(next);
            p_cur = p_next;
            q_cur = q_next;
            ++diag.accepted;
          }
        };
        for (int b = 0; b < mcmc.burn_in; ++b) {
          step();
        }
        for (int64_t s = 0; s < count; ++s) {
          for (int t = 0; t < mcmc.thinning; ++t) {
            step();
          }
          sink.push_back(current);
        }
      });
  McmcDiagnostics total;
  for (const McmcDiagnostics &d : per_chain) {
    total.proposals += d.proposals;
    total.accepted += d.accepted;
    total.target_evaluations += d.target_evaluations;
    total.distinct_evaluations += d.distinct_evaluations;
  }
  out.meta().extra.emplace_back("burn_in", std::to_string(mcmc.burn_in));
  out.meta().extra.emplace_back("thinning", std::to_string(mcmc.thinning));
  out.meta().extra.emplace_back("chains", std::to_string(opts.chains));
  out.meta().extra.emplace_back("acceptance_rate", fixed(total.acceptance_rate(), 6));
  out.meta().extra.emplace_back(
      "torontonians_per_sample",
      fixed(n > 0 ? static_cast<double>(total.target_evaluations) / static_cast<double>(n) : 0.0, 3));
  if (diagnostics != nullptr) {
    *diagnostics = total;
  }
  return out;
}

SampleSet mcmc_sampler(const ExperimentSpec &spec, int64_t n, uint64_t seed, const McmcOptions &mcmc,
                       const SamplerOptions &opts, const KernelOptions &kernel, McmcDiagnostics *diagnostics) {
  ClickProbability ideal(build(spec), kernel);
  DistinguishableModel proposal_model(spec);
  IndependenceProposal proposal{[&](Rng &rng) { return proposal_model.sample(rng); },
                                [&](const ClickPattern &s) { return proposal_model.pmf(s); }};
  return mcmc_chain_sampler(
      spec.modes, [&](const ClickPattern &s) { return ideal(s); }, proposal, n, seed, mcmc, opts, diagnostics);
}

}  // namespace gbs
