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

#ifndef GBS_HAAR_H
#define GBS_HAAR_H

#include <cstdint>

#include "gbs/common.h"

namespace gbs {

/// Haar-random m x m unitary: QR of a complex Ginibre matrix, with the phases of
/// R's diagonal folded back into Q so the result is exactly Haar distributed.
CMatrix haar_unitary(int modes, uint64_t seed);

struct HaarReport {
  int modes = 0;
  int elements = 0;  // matrix elements entering the distribution tests
  double unitarity_residual = 0;  // max |U U^dag - I|
  double amplitude_ks = 0;
  double amplitude_p = 1;  // |U_ij|^2 against the Beta(1, m-1) law
  double phase_ks = 0;
  double phase_p = 1;  // arg U_ij against uniform on (-pi, pi]

  bool unitary_ok(double tol = 1e-12) const { return unitarity_residual <= tol; }
  bool distribution_ok(double alpha = 0.01) const { return amplitude_p > alpha && phase_p > alpha; }
};

/// Unitarity residual plus amplitude and phase distribution tests on the first
/// `max_elements` entries in row-major order.
HaarReport haar_checks(const CMatrix &u, int max_elements = 5000);

}  // namespace gbs

#endif
