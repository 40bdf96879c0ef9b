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
#include <set>
#include <sstream>

namespace gbs {

namespace {

GaussianState checked(GaussianState state) {
#ifndef NDEBUG
  state.check_invariants();
#endif
  return state;
}

}  // namespace

CMatrix block_swap(int modes) {
  CMatrix x = CMatrix::Zero(2 * modes, 2 * modes);
  x.topRightCorner(modes, modes).setIdentity();
  x.bottomLeftCorner(modes, modes).setIdentity();
  return x;
}

bool is_unitary(const CMatrix &u, double tol) {
  if (u.rows() != u.cols()) {
    return false;
  }
  return max_abs(u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols())) <= tol;
}

GaussianState GaussianState::vacuum(int modes) {
  if (modes < 1) {
    throw std::invalid_argument("a Gaussian state needs at least one mode");
  }
  return GaussianState(modes, 0.5 * CMatrix::Identity(2 * modes, 2 * modes));
}

GaussianState GaussianState::from_covariance(CMatrix sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0 || sigma.rows() % 2 != 0) {
    throw std::invalid_argument("covariance must be a non-empty 2m x 2m matrix");
  }
  GaussianState state(static_cast<int>(sigma.rows() / 2), std::move(sigma));
  state.check_invariants();
  return state;
}

CMatrix GaussianState::husimi() const {
  return sigma_ + 0.5 * CMatrix::Identity(2 * modes_, 2 * modes_);
}

double GaussianState::mean_photons(int mode) const {
  require_mode(mode);
  return sigma_(mode, mode).real() - 0.5;
}

void GaussianState::check_invariants(double tol) const {
  double herm = max_abs(sigma_ - sigma_.adjoint());
  if (herm > tol) {
    std::ostringstream msg;
    msg << "covariance is not Hermitian (deviation " << herm << ")";
    throw NumericalError(msg.str());
  }
  CMatrix x = block_swap(modes_);
  double conj = max_abs(sigma_ - x * sigma_.conjugate() * x);
  if (conj > tol) {
    std::ostringstream msg;
    msg << "covariance violates conjugation symmetry (deviation " << conj << ")";
    throw NumericalError(msg.str());
  }
  Eigen::LLT<CMatrix> llt(husimi());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Husimi matrix sigma + I/2 is not positive definite");
  }
}

void GaussianState::require_mode(int mode) const {
  if (mode < 0 || mode >= modes_) {
    std::ostringstream msg;
    msg << "mode " << mode << " out of range [0, " << modes_ << ")";
    throw std::out_of_range(msg.str());
  }
}

bool GaussianState::is_vacuum_mode(int mode, double tol) const {
  require_mode(mode);
  for (int idx : {mode, mode + modes_}) {
    for (int c = 0; c < 2 * modes_; ++c) {
      Complex expected = c == idx ? Complex(0.5) : Complex(0.0);
      if (std::abs(sigma_(idx, c) - expected) > tol) {
        return false;
      }
    }
  }
  return true;
}

void GaussianState::require_vacuum(int mode) const {
  require_mode(mode);
  if (!is_vacuum_mode(mode)) {
    std::ostringstream msg;
    msg << "mode " << mode << " is already occupied";
    throw std::invalid_argument(msg.str());
  }
}

GaussianState GaussianState::with_smss(int mode, double r, double phi) const {
  require_vacuum(mode);
  if (!(r >= 0)) {
    throw std::invalid_argument("squeezing parameter must be non-negative");
  }
  int m = modes_;
  CMatrix s = sigma_;
  Complex aa = -std::polar(1.0, phi) * std::sinh(2 * r) / 2.0;
  s(mode, mode) = s(mode + m, mode + m) = std::cosh(2 * r) / 2;
  s(mode, mode + m) = aa;
  s(mode + m, mode) = std::conj(aa);
  return checked(GaussianState(m, std::move(s)));
}

GaussianState GaussianState::with_tmss(int mode_a, int mode_b, double r, double phi) const {
  if (mode_a == mode_b) {
    throw std::invalid_argument("two-mode squeezing needs two distinct modes");
  }
  require_vacuum(mode_a);
  require_vacuum(mode_b);
  if (!(r >= 0)) {
    throw std::invalid_argument("squeezing parameter must be non-negative");
  }
  int m = modes_;
  CMatrix s = sigma_;
  double diag = std::cosh(2 * r) / 2;
  Complex ab = std::polar(1.0, phi) * std::sinh(2 * r) / 2.0;
  s(mode_a, mode_a) = s(mode_a + m, mode_a + m) = diag;
  s(mode_b, mode_b) = s(mode_b + m, mode_b + m) = diag;
  s(mode_a, mode_b + m) = s(mode_b, mode_a + m) = ab;
  s(mode_b + m, mode_a) = s(mode_a + m, mode_b) = std::conj(ab);
  return checked(GaussianState(m, std::move(s)));
}

GaussianState GaussianState::with_thermal(int mode, double mean_photons) const {
  require_vacuum(mode);
  if (!(mean_photons >= 0)) {
    throw std::invalid_argument("thermal mean photon number must be non-negative");
  }
  CMatrix s = sigma_;
  s(mode, mode) = s(mode + modes_, mode + modes_) = mean_photons + 0.5;
  return checked(GaussianState(modes_, std::move(s)));
}

GaussianState GaussianState::apply_unitary(const CMatrix &u) const {
  if (u.rows() != modes_ || u.cols() != modes_) {
    std::ostringstream msg;
    msg << "unitary is " << u.rows() << "x" << u.cols() << " but the state has " << modes_ << " modes";
    throw std::invalid_argument(msg.str());
  }
  if (!is_unitary(u, 1e-8)) {
    throw std::invalid_argument("interferometer matrix is not unitary to 1e-8");
  }
  int m = modes_;
  CMatrix big = CMatrix::Zero(2 * m, 2 * m);
  big.topLeftCorner(m, m) = u;
  big.bottomRightCorner(m, m) = u.conjugate();
  CMatrix s = big * sigma_ * big.adjoint();
  // Round-off breaks exact Hermiticity; restore it.
  s = (0.5 * (s + s.adjoint())).eval();
  return checked(GaussianState(m, std::move(s)));
}

GaussianState GaussianState::apply_loss(std::span<const double> etas) const {
  if (static_cast<int>(etas.size()) != modes_) {
    throw std::invalid_argument("one transmission per mode is required");
  }
  int m = modes_;
  RVector d(2 * m);
  for (int i = 0; i < m; ++i) {
    double eta = etas[i];
    if (!(eta >= 0 && eta <= 1)) {
      std::ostringstream msg;
      msg << "transmission " << eta << " on mode " << i << " is outside [0, 1]";
      throw std::invalid_argument(msg.str());
    }
    d(i) = d(i + m) = std::sqrt(eta);
  }
  CMatrix s = d.asDiagonal() * sigma_ * d.asDiagonal();
  for (int i = 0; i < 2 * m; ++i) {
    s(i, i) += (1.0 - d(i) * d(i)) / 2;
  }
  return checked(GaussianState(m, std::move(s)));
}

GaussianState GaussianState::apply_loss(double eta) const {
  std::vector<double> etas(modes_, eta);
  return apply_loss(etas);
}

GaussianState GaussianState::reduce(std::span<const int> subset) const {
  if (subset.empty()) {
    throw std::invalid_argument("cannot reduce to an empty set of modes");
  }
  std::set<int> seen;
  for (int i : subset) {
    require_mode(i);
    if (!seen.insert(i).second) {
      std::ostringstream msg;
      msg << "mode " << i << " listed twice";
      throw std::invalid_argument(msg.str());
    }
  }
  int k = static_cast<int>(subset.size());
  std::vector<int> idx;
  idx.reserve(2 * k);
  for (int i : subset) {
    idx.push_back(i);
  }
  for (int i : subset) {
    idx.push_back(i + modes_);
  }
  return checked(GaussianState(k, sigma_(idx, idx)));
}

}  // namespace gbs
