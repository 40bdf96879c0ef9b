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

#include "gbs/gaussian_state.h"

#include <cmath>
#include <numbers>

#include "gbs/experiment.h"
#include "gbs/haar.h"
#include "gbs/probability.h"
#include "gtest/gtest.h"
#include "oracles.h"

using namespace gbs;

namespace {

void expect_near(const CMatrix &a, const CMatrix &b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LE(max_abs(a - b), tol);
}

GaussianState random_state(int m, Rng &rng) {
  GaussianState s = GaussianState::vacuum(m);
  int mode = 0;
  while (mode < m) {
    double pick = rng.uniform();
    if (pick < 0.4 && mode + 1 < m) {
      s = s.with_tmss(mode, mode + 1, 1.2 * rng.uniform(), 6 * rng.uniform());
      mode += 2;
    } else if (pick < 0.8) {
      s = s.with_smss(mode, 1.2 * rng.uniform(), 6 * rng.uniform());
      mode += 1;
    } else {
      s = s.with_thermal(mode, 2 * rng.uniform());
      mode += 1;
    }
  }
  std::vector<double> etas(m);
  for (double &e : etas) {
    e = rng.uniform();
  }
  return s.apply_unitary(haar_unitary(m, rng.next_u64())).apply_loss(etas);
}

}  // namespace

TEST(gaussian_state, vacuum) {
  GaussianState one = GaussianState::vacuum(1);
  expect_near(one.covariance(), 0.5 * CMatrix::Identity(2, 2), 0);
  GaussianState three = GaussianState::vacuum(3);
  expect_near(three.covariance(), 0.5 * CMatrix::Identity(6, 6), 0);
  EXPECT_THROW(GaussianState::vacuum(0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(click_probability(GaussianState::vacuum(2), ClickPattern(2)), 1.0);
}

TEST(gaussian_state, smss) {
  GaussianState v = GaussianState::vacuum(2);
  expect_near(v.with_smss(0, 0.0, 0.3).covariance(), v.covariance(), 0);

  GaussianState s = v.with_smss(0, 1.0, 0.0);
  EXPECT_NEAR(s.covariance()(0, 0).real(), std::cosh(2.0) / 2, 1e-15);
  EXPECT_NEAR(s.covariance()(0, 0).real(), 1.8811, 1e-4);
  EXPECT_NEAR(s.covariance()(2, 2).real(), 1.8811, 1e-4);
  EXPECT_NEAR(s.covariance()(0, 2).real(), -1.8134, 1e-4);
  EXPECT_NEAR(s.covariance()(0, 2).real(), -std::sinh(2.0) / 2, 1e-15);
  int mode0[] = {0};
  EXPECT_NEAR(silent_probability(s, mode0), 1 / std::cosh(1.0), 1e-12);
  EXPECT_NEAR(silent_probability(s, mode0), 0.64805, 1e-5);

  EXPECT_THROW(v.with_smss(2, 1.0, 0.0), std::out_of_range);
  EXPECT_THROW(s.with_smss(0, 0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(v.with_smss(0, -0.1, 0.0), std::invalid_argument);
}

TEST(gaussian_state, tmss) {
  GaussianState v = GaussianState::vacuum(3);
  expect_near(v.with_tmss(0, 2, 0.0, 1.0).covariance(), v.covariance(), 0);

  GaussianState t = v.with_tmss(0, 2, 1.0, 0.4);
  int arm[] = {2};
  GaussianState marginal = t.reduce(arm);
  expect_near(marginal.covariance(), GaussianState::vacuum(1).with_thermal(0, std::sinh(1.0) * std::sinh(1.0)).covariance(),
              1e-14);
  EXPECT_NEAR(marginal.mean_photons(0), 1.3811, 1e-4);
  int both[] = {0, 2};
  EXPECT_NEAR(silent_probability(t, both), 1 / std::pow(std::cosh(1.0), 2), 1e-12);
  EXPECT_NEAR(silent_probability(t, both), 0.41997, 1e-5);

  EXPECT_THROW(v.with_tmss(1, 1, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(t.with_tmss(0, 1, 1.0, 0.0), std::invalid_argument);
}

TEST(gaussian_state, thermal) {
  GaussianState v = GaussianState::vacuum(1);
  expect_near(v.with_thermal(0, 0.0).covariance(), v.covariance(), 0);
  int mode0[] = {0};
  EXPECT_NEAR(silent_probability(v.with_thermal(0, 1.0), mode0), 0.5, 1e-15);
  GaussianState two = v.with_thermal(0, 2.0);
  EXPECT_DOUBLE_EQ(two.covariance()(0, 0).real(), 2.5);
  EXPECT_DOUBLE_EQ(two.covariance()(1, 1).real(), 2.5);
  EXPECT_THROW(v.with_thermal(0, -1.0), std::invalid_argument);
}

TEST(gaussian_state, apply_unitary) {
  Rng rng(11);
  GaussianState s = random_state(4, rng);
  expect_near(s.apply_unitary(CMatrix::Identity(4, 4)).covariance(), s.covariance(), 1e-15);
  GaussianState v = GaussianState::vacuum(4);
  expect_near(v.apply_unitary(haar_unitary(4, 3)).covariance(), v.covariance(), 1e-14);

  // Identical squeezers on a symmetric 50:50 splitter come out two-mode squeezed.
  double r = 0.8;
  CMatrix bs(2, 2);
  bs << 1, Complex(0, 1), Complex(0, 1), 1;
  bs /= std::sqrt(2.0);
  GaussianState in = GaussianState::vacuum(2).with_smss(0, r, 0.0).with_smss(1, r, 0.0);
  GaussianState expected = GaussianState::vacuum(2).with_tmss(0, 1, r, -std::numbers::pi / 2);
  expect_near(in.apply_unitary(bs).covariance(), expected.covariance(), 1e-12);

  EXPECT_THROW(s.apply_unitary(CMatrix::Identity(3, 3)), std::invalid_argument);
  EXPECT_THROW(s.apply_unitary(2.0 * CMatrix::Identity(4, 4)), std::invalid_argument);
}

TEST(gaussian_state, apply_loss) {
  GaussianState t = GaussianState::vacuum(2).with_thermal(0, 3.0).with_smss(1, 0.7, 0.2);
  double ones[] = {1.0, 1.0};
  expect_near(t.apply_loss(ones).covariance(), t.covariance(), 0);
  double partial[] = {0.3, 1.0};
  EXPECT_NEAR(t.apply_loss(partial).mean_photons(0), 0.9, 1e-14);
  double kill[] = {0.0, 1.0};
  int mode0[] = {0};
  expect_near(t.apply_loss(kill).reduce(mode0).covariance(), GaussianState::vacuum(1).covariance(), 1e-15);
  double bad[] = {1.2, 0.5};
  EXPECT_THROW(t.apply_loss(bad), std::invalid_argument);
  double nan_eta[] = {std::nan(""), 0.5};
  EXPECT_THROW(t.apply_loss(nan_eta), std::invalid_argument);
}

TEST(gaussian_state, reduce) {
  Rng rng(5);
  GaussianState s = random_state(3, rng);
  int all[] = {0, 1, 2};
  expect_near(s.reduce(all).covariance(), s.covariance(), 0);

  GaussianState product = GaussianState::vacuum(3).with_thermal(0, 1.5).with_smss(2, 0.6, 1.0);
  int two[] = {2};
  expect_near(product.reduce(two).covariance(), GaussianState::vacuum(1).with_smss(0, 0.6, 1.0).covariance(), 0);

  int dup[] = {0, 0};
  int out[] = {3};
  EXPECT_THROW(s.reduce(dup), std::invalid_argument);
  EXPECT_THROW(s.reduce(out), std::out_of_range);
  EXPECT_THROW(s.reduce(std::span<const int>()), std::invalid_argument);
}

TEST(gaussian_state, build) {
  expect_near(build(empty_spec(3)).covariance(), GaussianState::vacuum(3).covariance(), 0);

  ExperimentSpec one = empty_spec(2);
  one.sources.push_back({SourceKind::kTmss, {0, 1}, 0.9, 0.3});
  expect_near(build(one).covariance(), GaussianState::vacuum(2).with_tmss(0, 1, 0.9, 0.3).covariance(), 1e-15);

  ExperimentSpec two = empty_spec(4);
  two.sources.push_back({SourceKind::kTmss, {0, 1}, 0.8, 0.1});
  two.sources.push_back({SourceKind::kTmss, {2, 3}, 1.1, 2.0});
  two.unitary = haar_unitary(4, 99);
  two.eta_network.assign(4, 0.5);
  std::vector<double> dist = full_distribution(build(two));
  ASSERT_EQ(dist.size(), 16u);
  double total = 0;
  for (int i = 0; i < 16; ++i) {
    total += click_probability(build(two), ClickPattern::from_index(i, 4));
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(gaussian_state, invariants_hold_after_random_operations) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    int m = 1 + static_cast<int>(rng.below(6));
    GaussianState s = random_state(m, rng);
    EXPECT_NO_THROW(s.check_invariants());
  }
}

TEST(gaussian_state, loss_composes_multiplicatively) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    GaussianState s = random_state(3, rng);
    std::vector<double> a(3), b(3), ab(3);
    for (int i = 0; i < 3; ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
      ab[i] = a[i] * b[i];
    }
    expect_near(s.apply_loss(a).apply_loss(b).covariance(), s.apply_loss(ab).covariance(), 1e-12);
  }
}

TEST(gaussian_state, unitaries_compose) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    GaussianState s = random_state(4, rng);
    CMatrix u = haar_unitary(4, rng.next_u64());
    CMatrix v = haar_unitary(4, rng.next_u64());
    expect_near(s.apply_unitary(v).apply_unitary(u).covariance(), s.apply_unitary(u * v).covariance(), 1e-10);
  }
}

TEST(gaussian_state, reduce_commutes_with_block_unitaries) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    GaussianState s = random_state(5, rng);
    CMatrix block = CMatrix::Zero(5, 5);
    block.topLeftCorner(2, 2) = haar_unitary(2, rng.next_u64());
    block.bottomRightCorner(3, 3) = haar_unitary(3, rng.next_u64());
    int first[] = {0, 1};
    expect_near(s.apply_unitary(block).reduce(first).covariance(),
                s.reduce(first).apply_unitary(block.topLeftCorner(2, 2)).covariance(), 1e-12);
  }
}

TEST(gaussian_state, smss_moments_match_fock_series) {
  for (double r : {0.3, 0.6}) {
    for (double phi : {0.0, 0.7, -2.1}) {
      // <a a> = sum_n conj(c_n) c_{n+2} sqrt((n+1)(n+2)) with
      // c_{2n} = (-e^{i phi} tanh r)^n sqrt((2n)!) / (2^n n!) / sqrt(cosh r).
      std::vector<Complex> c(41, 0.0);
      for (int n = 0; 2 * n <= 40; ++n) {
        double mag = std::pow(std::tanh(r), n) / std::sqrt(std::cosh(r));
        double log_ratio = 0.5 * std::lgamma(2 * n + 1.0) - n * std::log(2.0) - std::lgamma(n + 1.0);
        c[2 * n] = std::pow(-std::polar(1.0, phi), n) * mag * std::exp(log_ratio);
      }
      Complex aa = 0;
      double na = 0;
      for (int n = 0; n + 2 <= 40; ++n) {
        aa += std::conj(c[n]) * c[n + 2] * std::sqrt((n + 1.0) * (n + 2.0));
      }
      for (int n = 0; n <= 40; ++n) {
        na += n * std::norm(c[n]);
      }
      GaussianState s = GaussianState::vacuum(1).with_smss(0, r, phi);
      EXPECT_LE(std::abs(aa - s.covariance()(0, 1)), 1e-8) << "r=" << r << " phi=" << phi;
      EXPECT_NEAR(na, s.mean_photons(0), 1e-8);
    }
  }
}
