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

#include "gbs/sample_set.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "gbs/common.h"
#include "gbs/sectioned_text.h"

namespace gbs {

const char *to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::kIdealEnum:
      return "IDEAL_ENUM";
    case ModelTag::kIdealChain:
      return "IDEAL_CHAIN";
    case ModelTag::kIdealMcmc:
      return "IDEAL_MCMC";
    case ModelTag::kThermal:
      return "THERMAL";
    case ModelTag::kDistinguishable:
      return "DISTINGUISHABLE";
    case ModelTag::kUniform:
      return "UNIFORM";
  }
  return "?";
}

ModelTag parse_model_tag(const std::string &text) {
  std::string t;
  for (char c : text) {
    t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (t == "IDEAL_ENUM" || t == "ENUM") {
    return ModelTag::kIdealEnum;
  }
  if (t == "IDEAL_CHAIN" || t == "CHAIN" || t == "IDEAL") {
    return ModelTag::kIdealChain;
  }
  if (t == "IDEAL_MCMC" || t == "MCMC") {
    return ModelTag::kIdealMcmc;
  }
  if (t == "THERMAL") {
    return ModelTag::kThermal;
  }
  if (t == "DISTINGUISHABLE") {
    return ModelTag::kDistinguishable;
  }
  if (t == "UNIFORM") {
    return ModelTag::kUniform;
  }
  throw ConfigError("unknown model '" + text + "'");
}

bool is_ideal(ModelTag tag) {
  return tag == ModelTag::kIdealEnum || tag == ModelTag::kIdealChain || tag == ModelTag::kIdealMcmc;
}

const std::string *SampleMeta::find_extra(const std::string &key) const {
  for (const auto &[k, v] : extra) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

SampleSet::SampleSet(int modes, SampleMeta meta) : modes_(modes), meta_(std::move(meta)) {
  if (modes < 1) {
    throw std::invalid_argument("sample set needs at least one mode");
  }
}

void SampleSet::add(ClickPattern pattern) {
  if (pattern.modes() != modes_) {
    throw std::invalid_argument("pattern length " + std::to_string(pattern.modes()) + " does not match m=" +
                                std::to_string(modes_));
  }
  patterns_.push_back(std::move(pattern));
}

void SampleSet::append(const SampleSet &other) {
  if (other.modes_ != modes_) {
    throw std::invalid_argument("cannot append sample sets with different mode counts");
  }
  patterns_.insert(patterns_.end(), other.patterns_.begin(), other.patterns_.end());
}

std::vector<std::pair<ClickPattern, int64_t>> SampleSet::records() const {
  std::map<ClickPattern, int64_t> counts;
  for (const ClickPattern &p : patterns_) {
    ++counts[p];
  }
  return {counts.begin(), counts.end()};
}

std::vector<int64_t> SampleSet::click_histogram() const {
  std::vector<int64_t> h(modes_ + 1, 0);
  for (const ClickPattern &p : patterns_) {
    ++h[p.clicks()];
  }
  return h;
}

std::vector<double> SampleSet::empirical_distribution() const {
  if (modes_ > 24) {
    throw std::invalid_argument("empirical distribution over 2^m outcomes needs m <= 24");
  }
  std::vector<double> d(size_t{1} << modes_, 0.0);
  if (patterns_.empty()) {
    return d;
  }
  for (const ClickPattern &p : patterns_) {
    d[p.index()] += 1;
  }
  for (double &x : d) {
    x /= static_cast<double>(patterns_.size());
  }
  return d;
}

double SampleSet::click_rate(int i) const {
  if (i < 0 || i >= modes_) {
    throw std::out_of_range("mode index out of range");
  }
  if (patterns_.empty()) {
    throw std::invalid_argument("click rate of an empty sample set");
  }
  int64_t c = 0;
  for (const ClickPattern &p : patterns_) {
    c += p[i];
  }
  return static_cast<double>(c) / static_cast<double>(patterns_.size());
}

SampleSet SampleSet::filter_clicks(int lo, int hi) const {
  SampleSet out(modes_, meta_);
  for (const ClickPattern &p : patterns_) {
    int k = p.clicks();
    if (k >= lo && k <= hi) {
      out.patterns_.push_back(p);
    }
  }
  return out;
}

std::string format_samples(const SampleSet &samples) {
  const SampleMeta &meta = samples.meta();
  std::string out;
  out.reserve(128 + static_cast<size_t>(samples.size()) * (samples.modes() + 1));
  out += "#model=" + std::string(to_string(meta.model)) + "\n";
  out += "#seed=" + std::to_string(meta.seed) + "\n";
  out += "#m=" + std::to_string(samples.modes()) + "\n";
  out += "#spec_hash=" + meta.spec_hash + "\n";
  out += "#version=" + std::string(kVersion) + "\n";
  for (const auto &[k, v] : meta.extra) {
    out += "#" + k + "=" + v + "\n";
  }
  for (const ClickPattern &p : samples.patterns()) {
    out += p.to_string();
    out += '\n';
  }
  return out;
}

SampleSet parse_samples(const std::string &text, const std::string &origin) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  SampleMeta meta;
  int modes = -1;
  bool have_model = false;
  bool have_seed = false;
  std::vector<ClickPattern> patterns;
  auto fail = [&](const std::string &msg) {
    throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      fail("empty line");
    }
    if (line[0] == '#') {
      if (!patterns.empty()) {
        fail("header after sample lines");
      }
      size_t eq = line.find('=');
      if (eq == std::string::npos) {
        fail("header line needs key=value");
      }
      std::string key = line.substr(1, eq - 1);
      std::string value = line.substr(eq + 1);
      try {
        if (key == "model") {
          meta.model = parse_model_tag(value);
          have_model = true;
        } else if (key == "seed") {
          meta.seed = static_cast<uint64_t>(std::stoull(value));
          have_seed = true;
        } else if (key == "m") {
          modes = parse_int(value, "m");
        } else if (key == "spec_hash") {
          meta.spec_hash = value;
        } else if (key == "version") {
          // Informational; files from any version parse the same way.
        } else {
          meta.extra.emplace_back(key, value);
        }
      } catch (const ConfigError &e) {
        fail(e.what());
      } catch (const std::exception &) {
        fail("bad value for '" + key + "'");
      }
      continue;
    }
    if (modes < 1) {
      fail("sample line before a valid #m header");
    }
    if (static_cast<int>(line.size()) != modes) {
      fail("pattern length " + std::to_string(line.size()) + " does not match m=" + std::to_string(modes));
    }
    try {
      patterns.push_back(ClickPattern::from_string(line));
    } catch (const std::invalid_argument &e) {
      fail(e.what());
    }
  }
  if (!have_model || !have_seed || modes < 1) {
    throw ConfigError(origin + ": missing #model, #seed or #m header");
  }
  SampleSet out(modes, std::move(meta));
  for (ClickPattern &p : patterns) {
    out.add(std::move(p));
  }
  return out;
}

void save_samples(const SampleSet &samples, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << format_samples(samples);
  if (!out) {
    throw std::runtime_error("write failed for " + path);
  }
}

SampleSet load_samples(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read sample file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_samples(buf.str(), path);
}

SampleSet run_streams(int modes, ModelTag model, int64_t n, uint64_t seed, const SamplerOptions &opts,
                      const StreamFn &draw) {
  if (n < 0) {
    throw std::invalid_argument("sample count must be non-negative");
  }
  if (opts.chains < 1 || opts.workers < 1) {
    throw std::invalid_argument("chains and workers must be positive");
  }
  auto start = std::chrono::steady_clock::now();
  SampleMeta meta;
  meta.model = model;
  meta.seed = seed;
  meta.spec_hash = opts.spec_hash;
  int chains = opts.chains;
  std::vector<std::vector<ClickPattern>> parts(chains);
  Rng root(seed, 0x53414d50u + static_cast<uint64_t>(model));
  auto run_chain = [&](int c) {
    int64_t count = n / chains + (c < n % chains ? 1 : 0);
    Rng rng = root.split(static_cast<uint64_t>(c));
    parts[c].reserve(static_cast<size_t>(count));
    draw(rng, count, c, parts[c]);
    if (static_cast<int64_t>(parts[c].size()) != count) {
      throw std::logic_error("stream produced the wrong number of samples");
    }
  };
  if (opts.workers == 1 || chains == 1) {
    for (int c = 0; c < chains; ++c) {
      run_chain(c);
    }
  } else {
    for (int base = 0; base < chains; base += opts.workers) {
      std::vector<std::future<void>> jobs;
      for (int c = base; c < std::min(chains, base + opts.workers); ++c) {
        jobs.push_back(std::async(std::launch::async, run_chain, c));
      }
      for (auto &j : jobs) {
        j.get();
      }
    }
  }
  SampleSet out(modes, std::move(meta));
  for (auto &part : parts) {
    for (ClickPattern &p : part) {
      out.add(std::move(p));
    }
  }
  out.meta().wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace gbs
