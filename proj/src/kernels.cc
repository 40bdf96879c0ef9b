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

#include "gbs/kernels.h"

#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <vector>

namespace gbs {

double det_hpd(const CMatrix &m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("determinant needs a square matrix");
  }
  if (m.rows() == 0) {
    return 1.0;
  }
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("matrix is not Hermitian positive definite (Cholesky failed)");
  }
  double det = 1;
  const CMatrix &l = llt.matrixLLT();
  for (int i = 0; i < m.rows(); ++i) {
    double d = l(i, i).real();
    det *= d * d;
  }
  return det;
}

double torontonian_cost_seconds(int clicks) {
  // Calibrated loosely against the incremental kernel: ~1 ns per complex
  // multiply-add, 2 k^2 of them per subset.
  double k = clicks;
  return std::ldexp(1.0, clicks) * 2 * k * k * 1e-9;
}

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

int kernel_clicks(const CMatrix &o, const KernelOptions &opts) {
  if (o.rows() != o.cols() || o.rows() % 2 != 0) {
    throw std::invalid_argument("kernel matrix must be 2k x 2k");
  }
  int k = static_cast<int>(o.rows() / 2);
  if (k > opts.max_clicks) {
    std::ostringstream msg;
    msg << "Torontonian with " << k << " clicks exceeds the limit of " << opts.max_clicks << " (2^" << k
        << " subsets, roughly " << torontonian_cost_seconds(k) << " s on one core)";
    throw ScaleError(msg.str());
  }
  return k;
}

double error_bound(int k, double abs_total) {
  return (8.0 * k + 8.0) * kUnitRoundoff * abs_total;
}

// Depth-first subset walk over modes [first, k) that keeps a Cholesky factor of
// (I - O) restricted to the chosen modes, ordered (z1, z1+k, z2, z2+k, ...).
class IncrementalWalker {
 public:
  IncrementalWalker(const CMatrix &o, int k, bool o_is_complement = true) : k_(k), n_(2 * k) {
    m_re_.resize(n_ * n_);
    m_im_.resize(n_ * n_);
    for (int r = 0; r < n_; ++r) {
      for (int c = 0; c < n_; ++c) {
        Complex v = o_is_complement ? (r == c ? Complex(1.0) : Complex(0.0)) - o(r, c) : o(r, c);
        m_re_[r * n_ + c] = v.real();
        m_im_[r * n_ + c] = v.imag();
      }
    }
    l_re_.assign(n_ * n_, 0.0);
    l_im_.assign(n_ * n_, 0.0);
    diag_.assign(n_, 0.0);
    order_.assign(n_, 0);
  }

  // Appends the row pair of `mode` at position 2*depth; returns d1 * d2.
  double extend(int depth, int mode) {
    int pos = 2 * depth;
    return add_row(pos, mode) * add_row(pos + 1, mode + k_);
  }

  // Sums (-1)^(k-|Z|)/sqrt(det) over every extension of the current `depth`-mode
  // prefix by modes drawn from [start, k).
  void walk(int depth, int start, double root_det, CompensatedSum &acc) {
    double sign = ((k_ - depth) % 2 == 0) ? 1.0 : -1.0;
    acc.add(sign / root_det);
    ++visited_;
    for (int z = start; z < k_; ++z) {
      double d = extend(depth, z);
      walk(depth + 1, z + 1, root_det * d, acc);
    }
  }

  // Records prod(diag) of every extension of the current prefix into `out[mask]`.
  void record(int depth, int start, double root_det, uint64_t mask, std::vector<double> &out) {
    out[mask] = root_det;
    for (int z = start; z < k_; ++z) {
      double d = extend(depth, z);
      record(depth + 1, z + 1, root_det * d, mask | (uint64_t{1} << z), out);
    }
  }

  uint64_t visited() const { return visited_; }

 private:
  double add_row(int pos, int orig) {
    order_[pos] = orig;
    double *lr = &l_re_[pos * n_];
    double *li = &l_im_[pos * n_];
    const double *mr = &m_re_[orig * n_];
    const double *mi = &m_im_[orig * n_];
    double norm = 0;
    for (int j = 0; j < pos; ++j) {
      const double *jr = &l_re_[j * n_];
      const double *ji = &l_im_[j * n_];
      double sr = mr[order_[j]];
      double si = mi[order_[j]];
      // s -= L[pos][q] * conj(L[j][q])
      for (int q = 0; q < j; ++q) {
        sr -= lr[q] * jr[q] + li[q] * ji[q];
        si -= li[q] * jr[q] - lr[q] * ji[q];
      }
      double inv = 1.0 / diag_[j];
      lr[j] = sr * inv;
      li[j] = si * inv;
      norm += lr[j] * lr[j] + li[j] * li[j];
    }
    double d2 = mr[orig] - norm;
    if (!(d2 > 0)) {
      throw NumericalError("principal submatrix of I - O is not positive definite");
    }
    double d = std::sqrt(d2);
    diag_[pos] = d;
    return d;
  }

  int k_;
  int n_;
  std::vector<double> m_re_, m_im_;
  std::vector<double> l_re_, l_im_;
  std::vector<double> diag_;
  std::vector<int> order_;
  uint64_t visited_ = 0;
};

struct ChunkResult {
  CompensatedSum sum;
  uint64_t subsets = 0;
};

// Chunk `index` fixes membership of modes [0, prefix_bits) to the bits of `index`.
ChunkResult run_chunk(const CMatrix &o, int k, int prefix_bits, uint64_t index) {
  IncrementalWalker walker(o, k);
  ChunkResult out;
  int depth = 0;
  double root = 1;
  for (int z = 0; z < prefix_bits; ++z) {
    if ((index >> z) & 1) {
      root *= walker.extend(depth, z);
      ++depth;
    }
  }
  walker.walk(depth, prefix_bits, root, out.sum);
  out.subsets = walker.visited();
  return out;
}

}  // namespace

std::vector<double> principal_root_dets(const CMatrix &m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw std::invalid_argument("principal_root_dets needs a 2k x 2k matrix");
  }
  int k = static_cast<int>(m.rows() / 2);
  if (k > 30) {
    throw ScaleError("principal_root_dets: too many row pairs to tabulate");
  }
  std::vector<double> out(size_t{1} << k, 0.0);
  IncrementalWalker walker(m, k, false);
  walker.record(0, 0, 1.0, 0, out);
  return out;
}

TorontonianResult torontonian(const CMatrix &o, const KernelOptions &opts) {
  int k = kernel_clicks(o, opts);
  if (k == 0) {
    return {1.0, 0.0, 1};
  }
  int prefix_bits = 0;
  while (prefix_bits < k && (2 << prefix_bits) <= std::max(opts.chunks, 1)) {
    ++prefix_bits;
  }
  uint64_t chunks = uint64_t{1} << prefix_bits;
  std::vector<ChunkResult> parts(chunks);
  int workers = std::max(opts.workers, 1);
  if (workers == 1 || chunks == 1) {
    for (uint64_t c = 0; c < chunks; ++c) {
      parts[c] = run_chunk(o, k, prefix_bits, c);
    }
  } else {
    for (uint64_t base = 0; base < chunks; base += workers) {
      std::vector<std::future<ChunkResult>> running;
      for (uint64_t c = base; c < std::min<uint64_t>(chunks, base + workers); ++c) {
        running.push_back(std::async(std::launch::async, run_chunk, std::cref(o), k, prefix_bits, c));
      }
      for (size_t i = 0; i < running.size(); ++i) {
        parts[base + i] = running[i].get();
      }
    }
  }
  // Fixed merge order keeps the result independent of scheduling.
  CompensatedSum total;
  uint64_t subsets = 0;
  for (const ChunkResult &part : parts) {
    total.merge(part.sum);
    subsets += part.subsets;
  }
  return {total.value(), error_bound(k, total.abs_total()), subsets};
}

namespace {

double subset_term(const CMatrix &o, int k, uint64_t mask) {
  int s = std::popcount(mask);
  std::vector<int> idx;
  idx.reserve(2 * s);
  for (int i = 0; i < k; ++i) {
    if ((mask >> i) & 1) {
      idx.push_back(i);
    }
  }
  for (int i = 0; i < s; ++i) {
    idx.push_back(idx[i] + k);
  }
  double sign = ((k - s) % 2 == 0) ? 1.0 : -1.0;
  if (s == 0) {
    return sign;
  }
  CMatrix sub = CMatrix::Identity(2 * s, 2 * s) - o(idx, idx);
  double det;
  try {
    det = det_hpd(sub);
  } catch (const NumericalError &) {
    throw NumericalError("principal submatrix of I - O is not positive definite");
  }
  return sign / std::sqrt(det);
}

}  // namespace

TorontonianResult torontonian_gray(const CMatrix &o, const KernelOptions &opts) {
  int k = kernel_clicks(o, opts);
  CompensatedSum acc;
  uint64_t count = uint64_t{1} << k;
  for (uint64_t i = 0; i < count; ++i) {
    acc.add(subset_term(o, k, i ^ (i >> 1)));
  }
  return {acc.value(), error_bound(k, acc.abs_total()), count};
}

TorontonianResult torontonian_naive(const CMatrix &o, const KernelOptions &opts) {
  int k = kernel_clicks(o, opts);
  double sum = 0;
  double abs_total = 0;
  uint64_t count = uint64_t{1} << k;
  for (uint64_t mask = 0; mask < count; ++mask) {
    double t = subset_term(o, k, mask);
    sum += t;
    abs_total += std::abs(t);
  }
  return {sum, error_bound(k, abs_total) + count * kUnitRoundoff * abs_total, count};
}

namespace {

struct MatchingEnumerator {
  const CMatrix &a;
  int n;
  std::vector<int> pairs;  // flattened (i, j) of the partial matching
  Complex total = 0;

  void run(uint32_t unmatched) {
    if (unmatched == 0) {
      Complex prod = 1;
      for (size_t p = 0; p < pairs.size(); p += 2) {
        prod *= a(pairs[p], pairs[p + 1]);
      }
      total += prod;
      return;
    }
    int i = std::countr_zero(unmatched);
    uint32_t rest = unmatched & ~(uint32_t{1} << i);
    for (uint32_t scan = rest; scan != 0; scan &= scan - 1) {
      int j = std::countr_zero(scan);
      pairs.push_back(i);
      pairs.push_back(j);
      run(rest & ~(uint32_t{1} << j));
      pairs.pop_back();
      pairs.pop_back();
    }
  }
};

}  // namespace

Complex hafnian(const CMatrix &a, int max_dim) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("hafnian needs a square matrix");
  }
  int n = static_cast<int>(a.rows());
  if (n % 2 != 0) {
    warn("hafnian of an odd-dimensional matrix is zero");
    return 0;
  }
  if (n > max_dim || n > 32) {
    std::ostringstream msg;
    msg << "hafnian of a " << n << "x" << n << " matrix exceeds the enumeration limit of " << max_dim;
    throw ScaleError(msg.str());
  }
  if (n == 0) {
    return 1;
  }
  if (max_abs(a - a.transpose()) > 1e-10) {
    throw std::invalid_argument("hafnian needs a symmetric matrix");
  }
  MatchingEnumerator e{a, n, {}, 0};
  e.pairs.reserve(n);
  e.run(n == 32 ? ~uint32_t{0} : (uint32_t{1} << n) - 1);
  return e.total;
}

Complex permanent(const CMatrix &m, int max_n) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("permanent needs a square matrix");
  }
  int n = static_cast<int>(m.rows());
  if (n > max_n || n > 62) {
    std::ostringstream msg;
    msg << "permanent of a " << n << "x" << n << " matrix exceeds the limit of " << max_n;
    throw ScaleError(msg.str());
  }
  if (n == 0) {
    return 1;
  }
  std::vector<Complex> row_sums(n, 0.0);
  CompensatedSum re;
  CompensatedSum im;
  uint64_t gray = 0;
  uint64_t count = uint64_t{1} << n;
  for (uint64_t step = 1; step < count; ++step) {
    int j = std::countr_zero(step);
    gray ^= uint64_t{1} << j;
    bool added = (gray >> j) & 1;
    for (int i = 0; i < n; ++i) {
      row_sums[i] += added ? m(i, j) : -m(i, j);
    }
    Complex prod = 1;
    for (int i = 0; i < n; ++i) {
      prod *= row_sums[i];
    }
    if (std::popcount(gray) % 2 == 1) {
      prod = -prod;
    }
    re.add(prod.real());
    im.add(prod.imag());
  }
  Complex result(re.value(), im.value());
  return n % 2 == 1 ? -result : result;
}

}  // namespace gbs
