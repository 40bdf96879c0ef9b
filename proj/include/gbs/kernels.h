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

#ifndef GBS_KERNELS_H
#define GBS_KERNELS_H

#include <cstdint>
#include <vector>

#include "gbs/common.h"

namespace gbs {

struct KernelOptions {
  /// Largest click count the Torontonian will attempt.
  int max_clicks = 26;
  /// Number of contiguous pieces the subset space is cut into (rounded down to a
  /// power of two). Results depend only on this number, not on `workers`.
  int chunks = 1;
  int workers = 1;
};

struct TorontonianResult {
  double value = 0;
  /// Estimated absolute error of `value`.
  double error_estimate = 0;
  uint64_t subsets = 0;
};

/// Determinant of a Hermitian positive definite matrix from its Cholesky factor.
/// Throws NumericalError when the factorization fails.
double det_hpd(const CMatrix &m);

/// Torontonian of a 2k x 2k kernel matrix O with row/column pairing (i, i+k):
///
///     Tor(O) = sum_{Z subset [k]} (-1)^(k-|Z|) / sqrt(det (I - O)_Z)
///
/// Subsets are visited depth-first so each Cholesky factor extends its parent's by
/// two rows, giving O(2^k k^2) work. Throws ScaleError above opts.max_clicks and
/// NumericalError when a principal submatrix of I - O is not positive definite.
TorontonianResult torontonian(const CMatrix &o, const KernelOptions &opts = {});

/// Same sum with subsets in Gray-code order and a fresh Cholesky factorization per
/// subset, compensated accumulation. O(2^k k^3).
TorontonianResult torontonian_gray(const CMatrix &o, const KernelOptions &opts = {});

/// Binary-counter subset order with plain (uncompensated) summation.
TorontonianResult torontonian_naive(const CMatrix &o, const KernelOptions &opts = {});

/// sqrt(det M_Z) for every subset Z of the k row pairs (i, i+k) of a 2k x 2k Hermitian
/// positive definite matrix M, indexed by the bitmask of Z. Entry 0 is 1.
std::vector<double> principal_root_dets(const CMatrix &m);

/// Rough wall time of torontonian() at k clicks on one core.
double torontonian_cost_seconds(int clicks);

/// Hafnian of a symmetric matrix by enumerating its (n-1)!! perfect matchings.
/// Odd dimension gives 0 (with a warning). Throws ScaleError above max_dim.
Complex hafnian(const CMatrix &a, int max_dim = 16);

/// Permanent by Ryser's formula with Gray-code row-sum updates. Throws ScaleError above max_n.
Complex permanent(const CMatrix &m, int max_n = 20);

}  // namespace gbs

#endif
