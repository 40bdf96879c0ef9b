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

#ifndef GBS_GAUSSIAN_STATE_H
#define GBS_GAUSSIAN_STATE_H

#include <span>
#include <vector>

#include "gbs/common.h"

namespace gbs {

/// Zero-mean m-mode Gaussian state.
///
/// Stored as the 2m x 2m symmetrized second-moment matrix in the operator ordering
/// (a_1..a_m, a_1^dag..a_m^dag):
///
///     sigma = [[N + I/2, M], [conj(M), conj(N) + I/2]]
///
/// with N_jk = <a_k^dag a_j> and M_jk = <a_j a_k>. The vacuum is I/2 and the Husimi
/// matrix Q = sigma + I/2 is Hermitian positive definite for every physical state.
///
/// Values are immutable; every transformation returns a new state.
class GaussianState {
 public:
  static GaussianState vacuum(int modes);
  /// Validates the invariants; throws NumericalError if they fail.
  static GaussianState from_covariance(CMatrix sigma);

  int modes() const { return modes_; }
  const CMatrix &covariance() const { return sigma_; }
  CMatrix husimi() const;

  /// Mean photon number <a_i^dag a_i>.
  double mean_photons(int mode) const;
  bool is_vacuum_mode(int mode, double tol = 1e-12) const;

  /// Single-mode squeezed vacuum on `mode`: <a a> = -e^{i phi} sinh(2r)/2.
  GaussianState with_smss(int mode, double r, double phi) const;
  /// Two-mode squeezed vacuum on (mode_a, mode_b): <a_a a_b> = e^{i phi} sinh(2r)/2.
  GaussianState with_tmss(int mode_a, int mode_b, double r, double phi) const;
  GaussianState with_thermal(int mode, double mean_photons) const;

  /// Passive linear optics a -> U a. U must be unitary to 1e-8.
  GaussianState apply_unitary(const CMatrix &u) const;
  /// Pure-loss channel with per-mode transmissions in [0, 1].
  GaussianState apply_loss(std::span<const double> etas) const;
  GaussianState apply_loss(double eta) const;
  /// Marginal on `subset`, in the given order.
  GaussianState reduce(std::span<const int> subset) const;

  /// Throws NumericalError naming the first violated invariant.
  void check_invariants(double tol = 1e-10) const;

 private:
  GaussianState(int modes, CMatrix sigma) : modes_(modes), sigma_(std::move(sigma)) {}
  void require_mode(int mode) const;
  void require_vacuum(int mode) const;

  int modes_;
  CMatrix sigma_;
};

/// Swap of the a and a^dag blocks; sigma = X conj(sigma) X for physical states.
CMatrix block_swap(int modes);

/// True when ||U U^dag - I||_max <= tol.
bool is_unitary(const CMatrix &u, double tol = 1e-8);

}  // namespace gbs

#endif
