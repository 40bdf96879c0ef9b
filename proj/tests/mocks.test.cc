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

// Linked against the mock library alone: if the mocks ever called into the probability
// engine this binary would fail to link.

#include "gbs/mocks.h"

#include <cmath>
#include <map>

#include "gbs/haar.h"
#include "gtest/gtest.h"

using namespace gbs;

namespace {

ExperimentSpec single_source(SourceKind kind, int m, double r, double mean_photons, uint64_t haar_seed) {
  ExperimentSpec spec = empty_spec(m);
  SourceSpec src;
  src.kind = kind;
  src.modes = kind == SourceKind::kTmss ? std::vector<int>{0, 1} : std::vector<int>{0};
  src.r = r;
  src.mean_photons = mean_photons;
  spec.sources.push_back(src);
  spec.unitary = haar_unitary(m, haar_seed);
  return spec;
}

ExperimentSpec lossy_mix(int m, uint64_t seed) {
  ExperimentSpec spec = empty_spec(m);
  spec.sources.push_back({SourceKind::kTmss, {0, 1}, 0.8, 0.3, 0, 0.9});
  spec.sources.push_back({SourceKind::kSmss, {2}, 0.6, -0.4, 0, 0.8});
  spec.sources.push_back({SourceKind::kThermal, {3}, 0, 0, 0.7, 0.95});
  spec.unitary = haar_unitary(m, seed);
  for (int i = 0; i < m; ++i) {
    spec.eta_network[i] = 0.95;
    spec.eta_detector[i] = 0.7 + 0.05 * i;
  }
  return spec;
}

bool all_silent(const SampleSet &s) {
  for (const ClickPattern &p : s.patterns()) {
    if (p.clicks() != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST(mocks, uniform_extremes) {
  EXPECT_TRUE(all_silent(uniform_sampler(7, 0, 100, 1)));
  SampleSet full = uniform_sampler(7, 7, 100, 1);
  for (const ClickPattern &p : full.patterns()) {
    EXPECT_EQ(p.clicks(), 7);
  }
  EXPECT_THROW(uniform_sampler(7, 8, 1, 1), std::invalid_argument);
  EXPECT_EQ(*full.meta().find_extra("clicks"), "7");
}

TEST(mocks, uniform_frequencies) {
  const int64_t n = 100000;
  SampleSet s = uniform_sampler(10, 5, n, 2026);
  auto records = s.records();
  ASSERT_EQ(records.size(), 252u);
  double p = 1.0 / 252;
  double sigma = std::sqrt(n * p * (1 - p));
  for (const auto &[pattern, count] : records) {
    EXPECT_EQ(pattern.clicks(), 5);
    EXPECT_LE(std::abs(count - n * p), 3 * sigma) << pattern.to_string();
  }
}

TEST(mocks, geometric_mean) {
  Rng rng(5);
  double total = 0;
  for (int i = 0; i < 200000; ++i) {
    total += static_cast<double>(draw_geometric(0.6, rng));
  }
  // Mean ratio / (1 - ratio) = 1.5, standard error about 0.0044.
  EXPECT_NEAR(total / 200000, 1.5, 0.02);
  EXPECT_EQ(draw_geometric(0.0, rng), 0);
}

TEST(mocks, distinguishable_vacuum_sources) {
  ExperimentSpec spec = single_source(SourceKind::kTmss, 4, 0.0, 0, 3);
  EXPECT_TRUE(all_silent(distinguishable_mock_sampler(spec, 500, 1)));
  DistinguishableModel model(spec);
  EXPECT_DOUBLE_EQ(model.pmf(ClickPattern(4)), 1.0);
}

TEST(mocks, distinguishable_pmf_closed_forms) {
  // Identity network, one TMSS: the two arms click together with probability tanh^2 r.
  ExperimentSpec spec = single_source(SourceKind::kTmss, 2, 0.9, 0, 1);
  spec.unitary = CMatrix::Identity(2, 2);
  DistinguishableModel model(spec);
  double t2 = std::pow(std::tanh(0.9), 2);
  EXPECT_NEAR(model.pmf(ClickPattern::from_string("11")), t2, 1e-14);
  EXPECT_NEAR(model.pmf(ClickPattern::from_string("10")), 0.0, 1e-14);
  EXPECT_NEAR(model.pmf(ClickPattern::from_string("00")), 1 - t2, 1e-14);

  // Single SMSS on one detector: silent probability is the even-photon vacuum term 1/cosh r.
  ExperimentSpec smss = single_source(SourceKind::kSmss, 1, 1.0, 0, 1);
  EXPECT_NEAR(DistinguishableModel(smss).pmf(ClickPattern::from_string("0")), 1 / std::cosh(1.0), 1e-14);

  // Thermal with detector loss: click n eta / (1 + n eta).
  ExperimentSpec thermal = single_source(SourceKind::kThermal, 1, 0, 2.0, 1);
  thermal.eta_detector = {0.5};
  EXPECT_NEAR(DistinguishableModel(thermal).pmf(ClickPattern::from_string("1")), 0.5, 1e-14);
}

TEST(mocks, distinguishable_pmf_normalized_and_matches_sampler) {
  ExperimentSpec spec = lossy_mix(6, 77);
  DistinguishableModel model(spec);
  std::vector<double> pmf(64);
  double total = 0;
  for (int i = 0; i < 64; ++i) {
    pmf[i] = model.pmf(ClickPattern::from_index(i, 6));
    EXPECT_GE(pmf[i], 0.0);
    total += pmf[i];
  }
  EXPECT_NEAR(total, 1.0, 1e-12);

  SampleSet s = distinguishable_mock_sampler(spec, 100000, 9);
  std::vector<double> emp = s.empirical_distribution();
  double tvd = 0;
  for (int i = 0; i < 64; ++i) {
    tvd += std::abs(emp[i] - pmf[i]) / 2;
  }
  EXPECT_LE(tvd, 0.02);

  double mean = 0;
  for (const ClickPattern &p : s.patterns()) {
    mean += p.clicks();
  }
  EXPECT_NEAR(mean / s.size(), model.mean_clicks(), 0.02);
}

TEST(mocks, thermal_zero_mean_is_silent) {
  ExperimentSpec spec = single_source(SourceKind::kThermal, 3, 0, 0.0, 2);
  EXPECT_TRUE(all_silent(thermal_mock_sampler(spec, 1000, 4)));
  ExperimentSpec squeezed = single_source(SourceKind::kTmss, 3, 0.0, 0, 2);
  EXPECT_TRUE(all_silent(thermal_mock_sampler(squeezed, 1000, 4)));
}

TEST(mocks, thermal_single_mode_rate) {
  ExperimentSpec spec = single_source(SourceKind::kThermal, 1, 0, 1.0, 1);
  SampleSet s = thermal_mock_sampler(spec, 10000, 12);
  EXPECT_NEAR(s.click_rate(0), 0.5, 0.01);
}

TEST(mocks, thermal_marginals_match_field_law) {
  // Each output intensity is exponential with mean mu_j, so P(click) = mu_j / (1 + mu_j).
  ExperimentSpec spec = lossy_mix(4, 31);
  std::vector<double> n_in(4, 0.0);
  n_in[0] = n_in[1] = std::pow(std::sinh(0.8), 2) * 0.9;
  n_in[2] = std::pow(std::sinh(0.6), 2) * 0.8;
  n_in[3] = 0.7 * 0.95;
  std::vector<double> eta_out = spec.output_transmission();
  const int64_t n = 100000;
  SampleSet s = thermal_mock_sampler(spec, n, 5);
  for (int j = 0; j < 4; ++j) {
    double mu = 0;
    for (int i = 0; i < 4; ++i) {
      mu += std::norm(spec.unitary(j, i)) * n_in[i];
    }
    mu *= eta_out[j];
    double p = mu / (1 + mu);
    EXPECT_NEAR(s.click_rate(j), p, 4 * std::sqrt(p * (1 - p) / n)) << j;
  }
}

TEST(mocks, deterministic_given_seed_and_chains) {
  ExperimentSpec spec = lossy_mix(6, 3);
  SamplerOptions one;
  one.chains = 4;
  SamplerOptions many = one;
  many.workers = 3;
  EXPECT_EQ(format_samples(thermal_mock_sampler(spec, 999, 8, one)),
            format_samples(thermal_mock_sampler(spec, 999, 8, many)));
  EXPECT_EQ(format_samples(distinguishable_mock_sampler(spec, 999, 8, one)),
            format_samples(distinguishable_mock_sampler(spec, 999, 8, many)));
  EXPECT_EQ(format_samples(uniform_sampler(6, 3, 500, 8)), format_samples(uniform_sampler(6, 3, 500, 8)));
  EXPECT_NE(format_samples(uniform_sampler(6, 3, 500, 8)), format_samples(uniform_sampler(6, 3, 500, 9)));
}

TEST(sample_set, file_round_trip_is_bit_exact) {
  SamplerOptions opts;
  opts.spec_hash = "0123456789abcdef";
  SampleSet s = uniform_sampler(9, 4, 300, 42, opts);
  std::string text = format_samples(s);
  EXPECT_EQ(text.substr(0, 35), "#model=UNIFORM\n#seed=42\n#m=9\n#spec_");
  SampleSet back = parse_samples(text, "mem");
  EXPECT_EQ(format_samples(back), text);
  EXPECT_EQ(back.patterns(), s.patterns());
  EXPECT_EQ(back.meta().spec_hash, "0123456789abcdef");

  SampleSet empty = uniform_sampler(3, 1, 0, 1);
  std::string header_only = format_samples(empty);
  EXPECT_EQ(std::count(header_only.begin(), header_only.end(), '\n'), 6);
  EXPECT_EQ(parse_samples(header_only, "mem").size(), 0);
}

TEST(sample_set, parse_errors_name_the_line) {
  std::string good = "#model=THERMAL\n#seed=1\n#m=3\n#spec_hash=x\n#version=0\n010\n";
  EXPECT_EQ(parse_samples(good, "f").size(), 1);
  try {
    parse_samples("#model=THERMAL\n#seed=1\n#m=3\n0101\n", "f.samples");
    FAIL();
  } catch (const ConfigError &e) {
    EXPECT_NE(std::string(e.what()).find("f.samples:4"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_samples("#model=WHAT\n#seed=1\n#m=3\n", "f"), ConfigError);
  EXPECT_THROW(parse_samples("#seed=1\n#m=3\n000\n", "f"), ConfigError);
  EXPECT_THROW(parse_samples("#model=UNIFORM\n#seed=1\n#m=3\n0a0\n", "f"), ConfigError);
}

TEST(sample_set, aggregates) {
  SampleSet s(3, SampleMeta{});
  s.add(ClickPattern::from_string("110"));
  s.add(ClickPattern::from_string("000"));
  s.add(ClickPattern::from_string("110"));
  auto records = s.records();
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].first.to_string(), "000");
  EXPECT_EQ(records[1].second, 2);
  EXPECT_EQ(s.click_histogram(), (std::vector<int64_t>{1, 0, 2, 0}));
  EXPECT_DOUBLE_EQ(s.click_rate(0), 2.0 / 3);
  EXPECT_EQ(s.filter_clicks(1, 3).size(), 2);
  EXPECT_THROW(s.add(ClickPattern(2)), std::invalid_argument);
}
