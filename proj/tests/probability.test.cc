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

#include "gbs/probability.h"

#include <cmath>
#include <numbers>

#include "gbs/haar.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "test_specs.h"

using namespace gbs;

namespace {

CMatrix beamsplitter(int m, int a, int b) {
  CMatrix u = CMatrix::Identity(m, m);
  double s = 1 / std::sqrt(2.0);
  u(a, a) = s;
  u(a, b) = s;
  u(b, a) = s;
  u(b, b) = -s;
  return u;
}

double sum(const std::vector<double> &v) {
  double t = 0;
  for (double x : v) {
    t += x;
  }
  return t;
}

}  // namespace

TEST(probability, click_pattern) {
  ClickPattern p = ClickPattern::from_string("0110");
  EXPECT_EQ(p.modes(), 4);
  EXPECT_EQ(p.clicks(), 2);
  EXPECT_EQ(p.index(), 6u);
  EXPECT_EQ(ClickPattern::from_index(6, 4), p);
  EXPECT_EQ(p.to_string(), "0110");
  EXPECT_EQ(p.clicked_modes(), (std::vector<int>{1, 2}));
  EXPECT_THROW(ClickPattern::from_string("01x"), std::invalid_argument);
}

TEST(probability, click_probability_closed_forms) {
  EXPECT_DOUBLE_EQ(click_probability(GaussianState::vacuum(3), ClickPattern(3)), 1.0);
  GaussianState smss = GaussianState::vacuum(1).with_smss(0, 1.0, 0.4);
  EXPECT_NEAR(click_probability(smss, ClickPattern::from_string("1")), 1 - 1 / std::cosh(1.0), 1e-14);
  EXPECT_NEAR(click_probability(smss, ClickPattern::from_string("1")), 0.35195, 1e-5);
  GaussianState thermal = GaussianState::vacuum(1).with_thermal(0, 1.0);
  EXPECT_NEAR(click_probability(thermal, ClickPattern::from_string("1")), 0.5, 1e-15);
}

TEST(probability, kernel_refusal_names_pattern) {
  KernelOptions opts;
  opts.max_clicks = 2;
  GaussianState s = GaussianState::vacuum(4).with_tmss(0, 1, 0.5, 0).with_tmss(2, 3, 0.5, 0);
  try {
    click_probability(s, ClickPattern::from_string("1110"), opts);
    FAIL() << "expected refusal";
  } catch (const ScaleError &e) {
    EXPECT_NE(std::string(e.what()).find("1110"), std::string::npos);
  }
  EXPECT_THROW(click_probability(s, ClickPattern(3)), std::invalid_argument);
}

TEST(probability, silent_probability) {
  GaussianState v = GaussianState::vacuum(3);
  int some[] = {0, 2};
  EXPECT_DOUBLE_EQ(silent_probability(v, some), 1.0);
  int one[] = {0};
  EXPECT_NEAR(silent_probability(GaussianState::vacuum(1).with_smss(0, 1.0, 0), one), 0.64805, 1e-5);
  int both[] = {0, 1};
  EXPECT_NEAR(silent_probability(GaussianState::vacuum(2).with_tmss(0, 1, 1.0, 0), both), 0.41997, 1e-5);
  set_warning_sink(nullptr);
  EXPECT_EQ(silent_probability(v, std::span<const int>()), 1.0);
  set_warning_sink([](const std::string &) {});
}

TEST(probability, two_point_theory) {
  GaussianState product = GaussianState::vacuum(2).with_smss(0, 0.8, 0).with_thermal(1, 1.3);
  EXPECT_NEAR(two_point_theory(product, 0, 1), 0.0, 1e-15);

  GaussianState tmss = GaussianState::vacuum(2).with_tmss(0, 1, 1.0, 0.2);
  double t = std::tanh(1.0);
  double c = std::cosh(1.0);
  EXPECT_NEAR(two_point_theory(tmss, 0, 1), t * t / (c * c), 1e-14);
  EXPECT_NEAR(two_point_theory(tmss, 0, 1), 0.24360, 1e-5);

  GaussianState thermal_pair = GaussianState::vacuum(2).with_thermal(0, 0.7).with_thermal(1, 0.7);
  EXPECT_NEAR(two_point_theory(thermal_pair.apply_unitary(beamsplitter(2, 0, 1)), 0, 1), 0.0, 1e-14);
  EXPECT_THROW(two_point_theory(tmss, 1, 1), std::invalid_argument);
}

TEST(probability, fock_probability_closed_forms) {
  double t = std::tanh(1.0);
  double c = std::cosh(1.0);
  GaussianState smss = GaussianState::vacuum(1).with_smss(0, 1.0, 0.9);
  EXPECT_NEAR(fock_probability(smss, {2}), t * t / (2 * c), 1e-13);
  EXPECT_NEAR(fock_probability(smss, {2}), 0.18794, 1e-5);
  EXPECT_EQ(fock_probability(smss, {1}), 0.0);
  GaussianState tmss = GaussianState::vacuum(2).with_tmss(0, 1, 1.0, -0.3);
  EXPECT_NEAR(fock_probability(tmss, {1, 1}), t * t / (c * c), 1e-13);
  EXPECT_NEAR(fock_probability(tmss, {1, 0}), 0.0, 1e-15);

  // Mixed route: thermal law n^k / (n+1)^(k+1).
  GaussianState thermal = GaussianState::vacuum(1).with_thermal(0, 1.0);
  EXPECT_NEAR(fock_probability(thermal, {1}), 0.25, 1e-14);
  EXPECT_NEAR(fock_probability(thermal, {2}), 0.125, 1e-14);
  EXPECT_NEAR(fock_probability(thermal, {3}), 0.0625, 1e-14);

  // Lossy squeezed vacuum is the binomially thinned photon-number law.
  double eta = 0.6;
  std::vector<double> series = oracle::smss_series(0.7, 40);
  GaussianState lossy = GaussianState::vacuum(1).with_smss(0, 0.7, 0.0).apply_loss(eta);
  for (int k = 0; k <= 6; ++k) {
    double expected = 0;
    for (int n = k; n <= 40; ++n) {
      expected += series[n] * std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) *
                  std::pow(eta, k) * std::pow(1 - eta, n - k);
    }
    EXPECT_NEAR(fock_probability(lossy, {k}), expected, 1e-12) << k;
  }
  EXPECT_THROW(fock_probability(thermal, {9}), ScaleError);
}

TEST(probability, fock_oracle_examples) {
  ExperimentSpec spec = empty_spec(2);
  spec.sources.push_back({SourceKind::kTmss, {0, 1}, 0.6, 0.5});
  double t = std::tanh(0.6);
  double c = std::cosh(0.6);
  // Identity interferometer: the input photon-number law.
  EXPECT_NEAR(fock_oracle(spec, {1, 1}).probability, t * t / (c * c), 1e-14);
  EXPECT_NEAR(fock_oracle(spec, {2, 2}).probability, std::pow(t, 4) / (c * c), 1e-14);
  EXPECT_NEAR(fock_oracle(spec, {2, 1}).probability, 0.0, 1e-15);

  // Heralded single photon on mode 1 meets a 50:50 splitter with mode 2.
  ExperimentSpec herald = empty_spec(3);
  herald.sources.push_back({SourceKind::kTmss, {0, 1}, 0.6, 0.5});
  herald.unitary = beamsplitter(3, 1, 2);
  double pair = t * t / (c * c);
  EXPECT_NEAR(fock_oracle(herald, {1, 1, 0}).probability / pair, 0.5, 1e-12);
  EXPECT_NEAR(fock_oracle(herald, {1, 0, 1}).probability / pair, 0.5, 1e-12);
  EXPECT_GT(fock_oracle(herald, {0, 0, 0}, 4).truncation_error, 0);

  ExperimentSpec lossy = spec;
  lossy.eta_detector = {0.9, 0.9};
  EXPECT_THROW(fock_oracle(lossy, {0, 0}), std::invalid_argument);
  EXPECT_THROW(fock_oracle(empty_spec(5), {0, 0, 0, 0, 0}), ScaleError);
}

TEST(probability, fock_oracle_matches_hafnian_route) {
  // Two SMSS r = 0.5 through a random 2x2 interferometer, every pattern up to 6 photons.
  ExperimentSpec spec = empty_spec(2);
  spec.sources.push_back({SourceKind::kSmss, {0}, 0.5, 0.3});
  spec.sources.push_back({SourceKind::kSmss, {1}, 0.5, -1.1});
  spec.unitary = haar_unitary(2, 31);
  GaussianState state = build(spec);
  double tvd = 0;
  for (const FockPattern &p : fock_patterns_up_to(2, 6)) {
    tvd += std::abs(fock_probability(state, p) - fock_oracle(spec, p).probability);
  }
  EXPECT_LE(tvd / 2, 1e-6);
}

TEST(probability, click_from_fock) {
  auto clicks = click_from_fock({{{0, 0}, 0.5}, {{2, 0}, 0.2}, {{1, 0}, 0.1}, {{1, 3}, 0.2}});
  EXPECT_DOUBLE_EQ(clicks[ClickPattern::from_string("00")], 0.5);
  EXPECT_DOUBLE_EQ(clicks[ClickPattern::from_string("10")], 0.3 + 1e-17);
  EXPECT_DOUBLE_EQ(clicks[ClickPattern::from_string("11")], 0.2);

  for (double r : {0.5, 1.0}) {
    GaussianState smss = GaussianState::vacuum(1).with_smss(0, r, 0.0);
    std::vector<std::pair<FockPattern, double>> dist;
    for (const FockPattern &p : fock_patterns_up_to(1, 12)) {
      dist.push_back({p, fock_probability(smss, p)});
    }
    double truncated_click = click_from_fock(dist)[ClickPattern::from_string("1")];
    std::vector<double> series = oracle::smss_series(r, 200);
    double tail = 0;
    for (int n = 13; n <= 200; ++n) {
      tail += series[n];
    }
    // The truncated sum misses exactly the photon-number tail above 12.
    EXPECT_NEAR(truncated_click + tail, 1 - 1 / std::cosh(r), 1e-12) << r;
    if (r == 0.5) {
      EXPECT_NEAR(truncated_click, 1 - 1 / std::cosh(r), 1e-4);
    }
  }
}

TEST(probability, full_distribution) {
  std::vector<double> vac = full_distribution(GaussianState::vacuum(3));
  EXPECT_DOUBLE_EQ(vac[0], 1.0);
  for (size_t i = 1; i < vac.size(); ++i) {
    EXPECT_NEAR(vac[i], 0.0, 1e-15);
  }

  GaussianState split = GaussianState::vacuum(2).with_smss(0, 0.9, 0.0).apply_unitary(beamsplitter(2, 0, 1));
  std::vector<double> four = full_distribution(split);
  ASSERT_EQ(four.size(), 4u);
  EXPECT_NEAR(sum(four), 1.0, 1e-12);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(four[i], click_probability(split, ClickPattern::from_index(i, 2)), 1e-12);
    EXPECT_GE(four[i], 0.0);
  }

  ExperimentSpec six = tmss_device(6, {0.7, 0.9, 1.1}, {0.1, 1.2, -2.0}, 17, 1.0);
  EXPECT_NEAR(sum(full_distribution(build(six))), 1.0, 1e-9);
  EXPECT_THROW(full_distribution(GaussianState::vacuum(15)), ScaleError);
}

TEST(probability, state_space_dimension) {
  EXPECT_EQ(state_space_dimension(2, 2), 4);
  EXPECT_EQ(state_space_dimension(100, 100).str(), "1267650600228229401496703205376");
  boost::multiprecision::cpp_int full = boost::multiprecision::cpp_int(1) << 100;
  double rel = static_cast<double>(full - state_space_dimension(100, 76)) / static_cast<double>(full);
  EXPECT_GE(rel, 0.0);
  EXPECT_LE(rel, 1e-6);
  EXPECT_EQ(state_space_dimension(5, 0), 1);
  EXPECT_EQ(state_space_dimension(5, 1), 6);
}

TEST(probability, normalization_on_random_lossy_specs) {
  Rng rng(314);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 2 + static_cast<int>(rng.below(9));
    std::vector<double> p = full_distribution(build(gbs::fixtures::random_lossy_spec(m, rng)));
    EXPECT_NEAR(sum(p), 1.0, 1e-9) << "m=" << m;
  }
}

TEST(probability, full_distribution_matches_pattern_by_pattern) {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    GaussianState s = build(gbs::fixtures::random_lossy_spec(6, rng));
    std::vector<double> p = full_distribution(s);
    ClickProbability engine(s);
    for (size_t i = 0; i < p.size(); ++i) {
      EXPECT_NEAR(p[i], engine(ClickPattern::from_index(i, 6)), 1e-11);
    }
  }
}

TEST(probability, marginals_and_correlations_match_full_distribution) {
  Rng rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    int m = 3 + static_cast<int>(rng.below(8));
    GaussianState s = build(gbs::fixtures::random_lossy_spec(m, rng));
    std::vector<double> p = full_distribution(s);
    for (int i = 0; i < m; ++i) {
      double silent = 0;
      for (size_t idx = 0; idx < p.size(); ++idx) {
        if (!((idx >> i) & 1)) {
          silent += p[idx];
        }
      }
      int one[] = {i};
      EXPECT_NEAR(silent_probability(s, one), silent, 1e-9);
    }
    for (int i = 0; i + 1 < m; ++i) {
      int j = i + 1;
      double ci = 0;
      double cj = 0;
      double cij = 0;
      for (size_t idx = 0; idx < p.size(); ++idx) {
        bool bi = (idx >> i) & 1;
        bool bj = (idx >> j) & 1;
        ci += bi ? p[idx] : 0;
        cj += bj ? p[idx] : 0;
        cij += bi && bj ? p[idx] : 0;
      }
      EXPECT_NEAR(two_point_theory(s, i, j), cij - ci * cj, 1e-9);
    }
  }
}

TEST(probability, torontonian_is_a_sum_of_hafnians) {
  Rng rng(88);
  for (int trial = 0; trial < 4; ++trial) {
    int m = 1 + static_cast<int>(rng.below(3));
    ExperimentSpec spec = gbs::fixtures::random_pure_spec(m, rng, 0.1, 0.45);
    GaussianState s = build(spec);
    std::vector<std::pair<FockPattern, double>> fock;
    for (const FockPattern &p : fock_patterns_up_to(m, 12)) {
      fock.push_back({p, fock_probability(s, p)});
    }
    auto clicks = click_from_fock(fock);
    for (const auto &[pattern, prob] : clicks) {
      EXPECT_NEAR(click_probability(s, pattern), prob, 1e-4) << pattern.to_string();
    }
  }
}

TEST(probability, covariance_and_fock_routes_agree) {
  Rng rng(99);
  for (int trial = 0; trial < 6; ++trial) {
    int m = 1 + static_cast<int>(rng.below(3));
    ExperimentSpec spec = gbs::fixtures::random_pure_spec(m, rng, 0.2, 1.0);
    GaussianState s = build(spec);
    for (const FockPattern &p : fock_patterns_up_to(m, 6)) {
      EXPECT_NEAR(fock_probability(s, p), fock_oracle(spec, p).probability, 1e-6);
    }
  }
}
