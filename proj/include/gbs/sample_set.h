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

#ifndef GBS_SAMPLE_SET_H
#define GBS_SAMPLE_SET_H

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gbs/click_pattern.h"
#include "gbs/rng.h"

namespace gbs {

enum class ModelTag { kIdealEnum, kIdealChain, kIdealMcmc, kThermal, kDistinguishable, kUniform };

/// Upper-case tag as written in sample files, e.g. "IDEAL_CHAIN".
const char *to_string(ModelTag tag);
/// Accepts the file tag or a short CLI name (ideal, enum, chain, mcmc, thermal, distinguishable, uniform).
ModelTag parse_model_tag(const std::string &text);
bool is_ideal(ModelTag tag);

struct SampleMeta {
  ModelTag model = ModelTag::kIdealEnum;
  uint64_t seed = 0;
  std::string spec_hash = "none";
  /// Kept in memory only. Never written, so files stay byte-identical across reruns.
  double wall_seconds = 0;
  /// Extra "#key=value" header lines, written in this order after the fixed keys.
  std::vector<std::pair<std::string, std::string>> extra;

  const std::string *find_extra(const std::string &key) const;
};

/// Ordered click patterns from one sampler run.
class SampleSet {
 public:
  SampleSet(int modes, SampleMeta meta);

  int modes() const { return modes_; }
  int64_t size() const { return static_cast<int64_t>(patterns_.size()); }
  bool empty() const { return patterns_.empty(); }
  const SampleMeta &meta() const { return meta_; }
  SampleMeta &meta() { return meta_; }
  const std::vector<ClickPattern> &patterns() const { return patterns_; }

  void add(ClickPattern pattern);
  void append(const SampleSet &other);

  /// Distinct patterns with their counts, in pattern order.
  std::vector<std::pair<ClickPattern, int64_t>> records() const;
  /// Counts per click number 0..m.
  std::vector<int64_t> click_histogram() const;
  /// Empirical distribution indexed by ClickPattern::index(); needs m <= 24.
  std::vector<double> empirical_distribution() const;
  /// Fraction of samples in which detector i clicked.
  double click_rate(int i) const;
  /// Samples whose click number lies in [lo, hi], meta copied.
  SampleSet filter_clicks(int lo, int hi) const;

 private:
  int modes_;
  SampleMeta meta_;
  std::vector<ClickPattern> patterns_;
};

/// Sample file: "#model=", "#seed=", "#m=", "#spec_hash=", "#version=" and any extra
/// headers, then one m-character 0/1 line per sample.
std::string format_samples(const SampleSet &samples);
SampleSet parse_samples(const std::string &text, const std::string &origin);
void save_samples(const SampleSet &samples, const std::string &path);
SampleSet load_samples(const std::string &path);

struct SamplerOptions {
  /// Independent streams. Results depend on (seed, chains) and never on workers.
  int chains = 1;
  int workers = 1;
  std::string spec_hash = "none";
};

/// Draws `count` patterns into `out` from the given stream.
using StreamFn = std::function<void(Rng &rng, int64_t count, int chain, std::vector<ClickPattern> &out)>;

/// Splits n samples over opts.chains streams derived from (seed, model), runs them on
/// opts.workers threads and concatenates in chain order.
SampleSet run_streams(int modes, ModelTag model, int64_t n, uint64_t seed, const SamplerOptions &opts,
                      const StreamFn &draw);

}  // namespace gbs

#endif
