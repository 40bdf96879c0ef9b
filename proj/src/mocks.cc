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

#include "gbs/mocks.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gbs/common.h"

namespace gbs {

int64_t draw_geometric(double ratio, Rng &rng) {
  // P(n) = (1 - ratio) ratio^n.
  if (ratio <= 0) {
    return 0;
  }
  if (ratio >= 1) {
    throw std::invalid_argument("geometric ratio must be below 1");
  }
  return static_cast<int64_t>(std::floor(std::log(rng.uniform_open0()) / std::log(ratio)));
}

DistinguishableModel::DistinguishableModel(const ExperimentSpec &spec) : modes_(spec.modes) {
  spec.validate();
  int m = spec.modes;
  eta_in_ = spec.input_transmission();
  eta_out_ = spec.output_transmission();
  detect_ = Eigen::MatrixXd::Zero(m, m);
  route_cdf_.assign(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i) {
    double acc = 0;
    for (int j = 0; j < m; ++j) {
      double p = std::norm(spec.unitary(j, i));
      detect_(j, i) = eta_in_[i] * p * eta_out_[j];
      acc += p;
      route_cdf_[i][j] = acc;
    }
    for (double &c : route_cdf_[i]) {
      c /= acc;
    }
  }
  for (const SourceSpec &s : spec.sources) {
    Source src{s.kind, s.modes, s.r, std::pow(std::tanh(s.r), 2), s.mean_photons};
    if (s.kind != SourceKind::kVacuum) {
      sources_.push_back(src);
    }
  }
}

int DistinguishableModel::draw_photon_number(const Source &src, Rng &rng) const {
  switch (src.kind) {
    case SourceKind::kTmss:
      return static_cast<int>(draw_geometric(src.tanh2, rng));
    case SourceKind::kThermal:
      return static_cast<int>(draw_geometric(src.mean_photons / (1 + src.mean_photons), rng));
    case SourceKind::kSmss: {
      // Photon pairs n with P(n) = sech r * C(2n, n) / 4^n * tanh^{2n} r.
      double u = rng.uniform();
      double term = 1 / std::cosh(src.r);
      double acc = term;
      int n = 0;
      while (acc <= u && term > 0) {
        term *= src.tanh2 * (2.0 * n + 1) / (2.0 * n + 2);
        acc += term;
        ++n;
      }
      return n;
    }
    case SourceKind::kVacuum:
      return 0;
  }
  return 0;
}

ClickPattern DistinguishableModel::sample(Rng &rng) const {
  ClickPattern out(modes_);
  auto route = [&](int input) {
    if (rng.uniform() >= eta_in_[input]) {
      return;
    }
    const std::vector<double> &cdf = route_cdf_[input];
    double u = rng.uniform();
    int j = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    j = std::min(j, modes_ - 1);
    if (rng.uniform() < eta_out_[j]) {
      out.set(j);
    }
  };
  for (const Source &src : sources_) {
    int n = draw_photon_number(src, rng);
    for (int k = 0; k < n; ++k) {
      switch (src.kind) {
        case SourceKind::kTmss:
          route(src.inputs[0]);
          route(src.inputs[1]);
          break;
        case SourceKind::kSmss:
          route(src.inputs[0]);
          route(src.inputs[0]);
          break;
        default:
          route(src.inputs[0]);
          break;
      }
    }
  }
  return out;
}

double DistinguishableModel::silent_from_weights(const std::vector<double> &w) const {
  // w[i]: probability that a photon from input i is detected in the silent set.
  double f = 1;
  for (const Source &src : sources_) {
    switch (src.kind) {
      case SourceKind::kTmss: {
        double x = (1 - w[src.inputs[0]]) * (1 - w[src.inputs[1]]);
        f *= (1 - src.tanh2) / (1 - src.tanh2 * x);
        break;
      }
      case SourceKind::kSmss: {
        double x = 1 - w[src.inputs[0]];
        f *= 1 / (std::cosh(src.r) * std::sqrt(1 - src.tanh2 * x * x));
        break;
      }
      case SourceKind::kThermal:
        f *= 1 / (1 + src.mean_photons * w[src.inputs[0]]);
        break;
      case SourceKind::kVacuum:
        break;
    }
  }
  return f;
}

double DistinguishableModel::silent(std::span<const int> detectors) const {
  std::vector<double> w(modes_, 0.0);
  for (int j : detectors) {
    if (j < 0 || j >= modes_) {
      throw std::out_of_range("detector index out of range");
    }
    for (int i = 0; i < modes_; ++i) {
      w[i] += detect_(j, i);
    }
  }
  return silent_from_weights(w);
}

double DistinguishableModel::pmf(const ClickPattern &pattern) const {
  if (pattern.modes() != modes_) {
    throw std::invalid_argument("pattern length does not match the model");
  }
  std::vector<int> clicked = pattern.clicked_modes();
  int k = static_cast<int>(clicked.size());
  if (k > 30) {
    throw ScaleError("distinguishable pmf with " + std::to_string(k) + " clicks is too large");
  }
  // Start from the silent detectors and add clicked ones along a Gray code.
  std::vector<double> w(modes_, 0.0);
  for (int j = 0; j < modes_; ++j) {
    if (!pattern[j]) {
      for (int i = 0; i < modes_; ++i) {
        w[i] += detect_(j, i);
      }
    }
  }
  CompensatedSum total;
  total.add(silent_from_weights(w));
  uint64_t gray = 0;
  for (uint64_t step = 1; step < (uint64_t{1} << k); ++step) {
    int bit = std::countr_zero(step);
    gray ^= uint64_t{1} << bit;
    double sign = (gray >> bit) & 1 ? 1.0 : -1.0;
    int j = clicked[bit];
    for (int i = 0; i < modes_; ++i) {
      w[i] += sign * detect_(j, i);
    }
    double term = silent_from_weights(w);
    total.add(std::popcount(gray) % 2 ? -term : term);
  }
  return std::clamp(total.value(), 0.0, 1.0);
}

double DistinguishableModel::mean_clicks() const {
  double mean = 0;
  for (int j = 0; j < modes_; ++j) {
    int one[] = {j};
    mean += 1 - silent(one);
  }
  return mean;
}

SampleSet distinguishable_mock_sampler(const ExperimentSpec &spec, int64_t n, uint64_t seed,
                                       const SamplerOptions &opts) {
  DistinguishableModel model(spec);
  return run_streams(spec.modes, ModelTag::kDistinguishable, n, seed, opts,
                     [&](Rng &rng, int64_t count, int, std::vector<ClickPattern> &out) {
                       for (int64_t s = 0; s < count; ++s) {
                         out.push_back(model.sample(rng));
                       }
                     });
}

SampleSet thermal_mock_sampler(const ExperimentSpec &spec, int64_t n, uint64_t seed, const SamplerOptions &opts) {
  ExperimentSpec thermal = thermal_equivalent(spec);
  thermal.validate();
  int m = spec.modes;
  // Field standard deviation per input after collection loss.
  std::vector<double> sigma(m, 0.0);
  for (const SourceSpec &s : thermal.sources) {
    if (s.kind == SourceKind::kThermal) {
      sigma[s.modes[0]] = std::sqrt(s.mean_photons * s.eta_collect);
    }
  }
  std::vector<double> out_amp(m);
  std::vector<double> eta_out = spec.output_transmission();
  for (int j = 0; j < m; ++j) {
    out_amp[j] = std::sqrt(eta_out[j]);
  }
  std::vector<int> active;
  for (int i = 0; i < m; ++i) {
    if (sigma[i] > 0) {
      active.push_back(i);
    }
  }
  return run_streams(m, ModelTag::kThermal, n, seed, opts,
                     [&](Rng &rng, int64_t count, int, std::vector<ClickPattern> &out) {
                       CVector alpha = CVector::Zero(m);
                       for (int64_t s = 0; s < count; ++s) {
                         for (int i : active) {
                           double re = rng.normal();
                           double im = rng.normal();
                           alpha[i] = Complex(re, im) * (sigma[i] / std::sqrt(2.0));
                         }
                         ClickPattern p(m);
                         for (int j = 0; j < m; ++j) {
                           Complex beta = 0;
                           for (int i : active) {
                             beta += spec.unitary(j, i) * alpha[i];
                           }
                           double click = -std::expm1(-std::norm(beta * out_amp[j]));
                           if (rng.uniform() < click) {
                             p.set(j);
                           }
                         }
                         out.push_back(std::move(p));
                       }
                     });
}

SampleSet uniform_band_sampler(int modes, int lo, int hi, int64_t n, uint64_t seed, const SamplerOptions &opts) {
  if (modes < 1 || lo < 0 || hi > modes || lo > hi) {
    throw std::invalid_argument("uniform sampler needs 0 <= lo <= hi <= m");
  }
  // Click number k is drawn with weight C(m, k), then a uniform k-subset.
  std::vector<double> cdf;
  double binom = 1;
  double acc = 0;
  for (int k = 0; k <= hi; ++k) {
    if (k > 0) {
      binom = binom * (modes - k + 1) / k;
    }
    if (k >= lo) {
      acc += binom;
      cdf.push_back(acc);
    }
  }
  SampleSet out = run_streams(modes, ModelTag::kUniform, n, seed, opts,
                              [&](Rng &rng, int64_t count, int, std::vector<ClickPattern> &sink) {
                                std::vector<int> idx(modes);
                                for (int64_t s = 0; s < count; ++s) {
                                  int k = lo;
                                  if (lo < hi) {
                                    double u = rng.uniform() * acc;
                                    k = lo + static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
                                    k = std::min(k, hi);
                                  }
                                  std::iota(idx.begin(), idx.end(), 0);
                                  ClickPattern p(modes);
                                  for (int t = 0; t < k; ++t) {
                                    int pick = t + static_cast<int>(rng.below(modes - t));
                                    std::swap(idx[t], idx[pick]);
                                    p.set(idx[t]);
                                  }
                                  sink.push_back(std::move(p));
                                }
                              });
  out.meta().extra.emplace_back("clicks", lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi));
  return out;
}

SampleSet uniform_sampler(int modes, int n_clicks, int64_t n, uint64_t seed, const SamplerOptions &opts) {
  if (modes < 1 || n_clicks < 0 || n_clicks > modes) {
    throw std::invalid_argument("uniform sampler needs 0 <= n_clicks <= m");
  }
  return uniform_band_sampler(modes, n_clicks, n_clicks, n, seed, opts);
}

}  // namespace gbs
