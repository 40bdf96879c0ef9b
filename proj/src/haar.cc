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

#include "gbs/haar.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gbs/rng.h"
#include "gbs/stats.h"

namespace gbs {

CMatrix haar_unitary(int modes, uint64_t seed) {
  if (modes < 1) {
    throw std::invalid_argument("unitary dimension must be positive");
  }
  Rng rng(seed, 0x4841);
  CMatrix z(modes, modes);
  for (int r = 0; r < modes; ++r) {
    for (int c = 0; c < modes; ++c) {
      double re = rng.normal();
      double im = rng.normal();
      z(r, c) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(modes, modes);
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < modes; ++c) {
    Complex d = r(c, c);
    double mag = std::abs(d);
    q.col(c) *= mag > 0 ? d / mag : Complex(1.0);
  }
  return q;
}

HaarReport haar_checks(const CMatrix &u, int max_elements) {
  if (u.rows() != u.cols() || u.rows() == 0) {
    throw std::invalid_argument("Haar checks need a non-empty square matrix");
  }
  HaarReport rep;
  int m = static_cast<int>(u.rows());
  rep.modes = m;
  rep.unitarity_residual = max_abs(u * u.adjoint() - CMatrix::Identity(m, m));

  std::vector<double> amps;
  std::vector<double> phases;
  for (int r = 0; r < m && static_cast<int>(amps.size()) < max_elements; ++r) {
    for (int c = 0; c < m && static_cast<int>(amps.size()) < max_elements; ++c) {
      amps.push_back(std::norm(u(r, c)));
      phases.push_back(std::arg(u(r, c)));
    }
  }
  rep.elements = static_cast<int>(amps.size());

  // For m = 1 every element has modulus one; the amplitude law is a point mass.
  if (m > 1) {
    auto beta_cdf = [m](double y) {
      if (y <= 0) {
        return 0.0;
      }
      if (y >= 1) {
        return 1.0;
      }
      return 1.0 - std::pow(1.0 - y, m - 1);
    };
    KsResult amp = ks_test(amps, beta_cdf);
    rep.amplitude_ks = amp.statistic;
    rep.amplitude_p = amp.p_value;
  }
  auto phase_cdf = [](double t) { return std::clamp((t + std::numbers::pi) / (2 * std::numbers::pi), 0.0, 1.0); };
  KsResult ph = ks_test(phases, phase_cdf);
  rep.phase_ks = ph.statistic;
  rep.phase_p = ph.p_value;
  return rep;
}

}  // namespace gbs
