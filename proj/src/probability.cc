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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gbs {

namespace {

struct HusimiInverse {
  CMatrix inverse;
  double root_det;
};

HusimiInverse invert_husimi(const CMatrix &q) {
  Eigen::LLT<CMatrix> llt(q);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Husimi matrix is not positive definite");
  }
  double root_det = 1;
  for (int i = 0; i < q.rows(); ++i) {
    root_det *= llt.matrixLLT()(i, i).real();
  }
  CMatrix inv = llt.solve(CMatrix::Identity(q.rows(), q.cols()));
  inv = (0.5 * (inv + inv.adjoint())).eval();
  return {std::move(inv), root_det};
}

}  // namespace

ClickProbability::ClickProbability(const GaussianState &state, KernelOptions opts)
    : modes_(state.modes()), opts_(opts) {
  HusimiInverse h = invert_husimi(state.husimi());
  o_ = CMatrix::Identity(2 * modes_, 2 * modes_) - h.inverse;
  root_det_q_ = h.root_det;
}

CMatrix ClickProbability::kernel_matrix(const ClickPattern &pattern) const {
  if (pattern.modes() != modes_) {
    throw std::invalid_argument("pattern has " + std::to_string(pattern.modes()) + " modes, state has " +
                                std::to_string(modes_));
  }
  std::vector<int> idx = pattern.clicked_modes();
  size_t k = idx.size();
  for (size_t i = 0; i < k; ++i) {
    idx.push_back(idx[i] + modes_);
  }
  return o_(idx, idx);
}

ProbabilityResult ClickProbability::evaluate(const ClickPattern &pattern) const {
  CMatrix o = kernel_matrix(pattern);
  TorontonianResult tor;
  try {
    tor = torontonian(o, opts_);
  } catch (const ScaleError &e) {
    throw ScaleError(std::string(e.what()) + " [pattern " + pattern.to_string() + "]");
  }
  ProbabilityResult r{tor.value / root_det_q_, tor.error_estimate / root_det_q_};
  if (r.value < -r.error_estimate - 1e-300) {
    std::ostringstream msg;
    msg << "negative probability " << r.value << " beyond error estimate " << r.error_estimate << " for pattern "
        << pattern.to_string();
    throw NumericalError(msg.str());
  }
  r.value = std::clamp(r.value, 0.0, 1.0);
  return r;
}

double click_probability(const GaussianState &state, const ClickPattern &pattern, const KernelOptions &opts) {
  return ClickProbability(state, opts)(pattern);
}

double silent_probability(const GaussianState &state, std::span<const int> subset) {
  if (subset.empty()) {
    warn("silent probability of an empty mode set is 1");
    return 1.0;
  }
  GaussianState reduced = state.reduce(subset);
  return 1.0 / std::sqrt(det_hpd(reduced.husimi()));
}

double two_point_theory(const GaussianState &state, int i, int j) {
  if (i == j) {
    throw std::invalid_argument("two-point correlation needs two distinct modes");
  }
  int both[] = {i, j};
  int only_i[] = {i};
  int only_j[] = {j};
  return silent_probability(state, both) - silent_probability(state, only_i) * silent_probability(state, only_j);
}

std::vector<double> full_distribution(const GaussianState &state, int max_modes) {
  int m = state.modes();
  if (m > max_modes) {
    std::ostringstream msg;
    msg << "full distribution over " << m << " modes needs 2^" << m << " entries (~"
        << std::ldexp(16.0, m) / (1 << 20) << " MiB); limit is " << max_modes << " modes";
    throw ScaleError(msg.str());
  }
  HusimiInverse h = invert_husimi(state.husimi());
  // g(Z) = 1 / (sqrt(det Q) sqrt(det (Q^{-1})_Z)) is the probability that every mode
  // outside Z is silent; the Moebius transform over subsets turns it into p(S).
  std::vector<double> roots = principal_root_dets(h.inverse);
  std::vector<double> p(roots.size());
  for (size_t z = 0; z < roots.size(); ++z) {
    p[z] = 1.0 / (h.root_det * roots[z]);
  }
  for (int i = 0; i < m; ++i) {
    size_t bit = size_t{1} << i;
    for (size_t s = 0; s < p.size(); ++s) {
      if (s & bit) {
        p[s] -= p[s ^ bit];
      }
    }
  }
  return p;
}

namespace {

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) {
    f *= i;
  }
  return f;
}

}  // namespace

double fock_probability(const GaussianState &state, const FockPattern &pattern, int max_hafnian_dim) {
  int m = state.modes();
  if (static_cast<int>(pattern.size()) != m) {
    throw std::invalid_argument("Fock pattern length does not match the state");
  }
  int total = 0;
  double occupation_factorials = 1;
  for (int n : pattern) {
    if (n < 0) {
      throw std::invalid_argument("photon numbers must be non-negative");
    }
    total += n;
    occupation_factorials *= factorial(n);
  }
  HusimiInverse h = invert_husimi(state.husimi());
  CMatrix o = CMatrix::Identity(2 * m, 2 * m) - h.inverse;
  // A = X O: rows of the a^dag block first.
  CMatrix a(2 * m, 2 * m);
  a.topRows(m) = o.bottomRows(m);
  a.bottomRows(m) = o.topRows(m);
  a = (0.5 * (a + a.transpose())).eval();

  std::vector<int> rep;
  for (int i = 0; i < m; ++i) {
    rep.insert(rep.end(), pattern[i], i);
  }
  bool pure = max_abs(o.topLeftCorner(m, m)) <= 1e-10;
  double value;
  if (pure) {
    if (total % 2 == 1) {
      return 0.0;
    }
    if (total > max_hafnian_dim) {
      throw ScaleError("Fock probability with " + std::to_string(total) + " photons exceeds the Hafnian limit");
    }
    CMatrix b = a.topLeftCorner(m, m);
    value = std::norm(hafnian(b(rep, rep), max_hafnian_dim));
  } else {
    if (2 * total > max_hafnian_dim) {
      throw ScaleError("mixed-state Fock probability with " + std::to_string(total) +
                       " photons exceeds the Hafnian limit");
    }
    std::vector<int> idx = rep;
    for (int i : rep) {
      idx.push_back(i + m);
    }
    value = hafnian(a(idx, idx), max_hafnian_dim).real();
  }
  return std::max(0.0, value / (occupation_factorials * h.root_det));
}

namespace {

using Amplitudes = std::map<std::vector<int>, Complex>;

// Photon-number expansion of one source over its own modes, up to `truncation` photons.
std::vector<std::pair<std::vector<int>, Complex>> source_amplitudes(const SourceSpec &src, int truncation) {
  std::vector<std::pair<std::vector<int>, Complex>> out;
  double t = std::tanh(src.r);
  switch (src.kind) {
    case SourceKind::kVacuum:
      out.push_back({{0}, 1.0});
      break;
    case SourceKind::kSmss: {
      // (-e^{i phi} tanh r)^n sqrt((2n)!) / (2^n n!) / sqrt(cosh r) on |2n>
      Complex base = -std::polar(t, src.phi);
      Complex c = 1.0 / std::sqrt(std::cosh(src.r));
      for (int n = 0; 2 * n <= truncation; ++n) {
        if (n > 0) {
          c *= base * std::sqrt((2.0 * n) * (2.0 * n - 1)) / (2.0 * n);
        }
        out.push_back({{2 * n}, c});
      }
      break;
    }
    case SourceKind::kTmss: {
      // (e^{i phi} tanh r)^n / cosh r on |n, n>
      Complex base = std::polar(t, src.phi);
      Complex c = 1.0 / std::cosh(src.r);
      for (int n = 0; 2 * n <= truncation; ++n) {
        if (n > 0) {
          c *= base;
        }
        out.push_back({{n, n}, c});
      }
      break;
    }
    case SourceKind::kThermal:
      throw std::invalid_argument("the Fock oracle handles pure sources only");
  }
  return out;
}

}  // namespace

FockOracleResult fock_oracle(const ExperimentSpec &spec, const FockPattern &pattern, int truncation) {
  spec.validate();
  if (spec.modes > 4 || truncation > 12 || truncation < 0) {
    throw ScaleError("Fock oracle supports at most 4 modes and 12 photons");
  }
  if (!spec.is_lossless()) {
    throw std::invalid_argument("Fock oracle needs a lossless device");
  }
  int m = spec.modes;
  if (static_cast<int>(pattern.size()) != m) {
    throw std::invalid_argument("Fock pattern length does not match the device");
  }
  int total = std::accumulate(pattern.begin(), pattern.end(), 0);
  if (total > truncation) {
    throw std::invalid_argument("pattern has more photons than the truncation");
  }

  Amplitudes input;
  input[std::vector<int>(m, 0)] = 1.0;
  for (const SourceSpec &src : spec.sources) {
    Amplitudes next;
    for (const auto &[occ, amp] : input) {
      int have = std::accumulate(occ.begin(), occ.end(), 0);
      for (const auto &[local, c] : source_amplitudes(src, truncation)) {
        int add = std::accumulate(local.begin(), local.end(), 0);
        if (have + add > truncation) {
          continue;
        }
        std::vector<int> combined = occ;
        for (size_t i = 0; i < src.modes.size(); ++i) {
          combined[src.modes[i]] += local[i];
        }
        next[combined] += amp * c;
      }
    }
    input = std::move(next);
  }

  FockOracleResult result;
  double retained = 0;
  for (const auto &entry : input) {
    retained += std::norm(entry.second);
  }
  result.truncation_error = std::max(0.0, 1.0 - retained);

  std::vector<int> rows;
  double out_factorials = 1;
  for (int i = 0; i < m; ++i) {
    rows.insert(rows.end(), pattern[i], i);
    out_factorials *= factorial(pattern[i]);
  }
  Complex amplitude = 0;
  for (const auto &[occ, c] : input) {
    if (std::accumulate(occ.begin(), occ.end(), 0) != total) {
      continue;
    }
    std::vector<int> cols;
    double in_factorials = 1;
    for (int j = 0; j < m; ++j) {
      cols.insert(cols.end(), occ[j], j);
      in_factorials *= factorial(occ[j]);
    }
    CMatrix sub = spec.unitary(rows, cols);
    amplitude += c * permanent(sub) / std::sqrt(out_factorials * in_factorials);
  }
  result.probability = std::norm(amplitude);
  return result;
}

std::map<ClickPattern, double> click_from_fock(const std::vector<std::pair<FockPattern, double>> &fock) {
  std::map<ClickPattern, double> out;
  for (const auto &[occ, prob] : fock) {
    ClickPattern p(static_cast<int>(occ.size()));
    for (size_t i = 0; i < occ.size(); ++i) {
      p.set(static_cast<int>(i), occ[i] > 0);
    }
    out[p] += prob;
  }
  return out;
}

std::vector<FockPattern> fock_patterns_up_to(int modes, int max_photons) {
  std::vector<FockPattern> out;
  FockPattern cur(modes, 0);
  auto rec = [&](auto &&self, int i, int left) -> void {
    if (i == modes) {
      out.push_back(cur);
      return;
    }
    for (int n = 0; n <= left; ++n) {
      cur[i] = n;
      self(self, i + 1, left - n);
    }
    cur[i] = 0;
  };
  rec(rec, 0, max_photons);
  return out;
}

boost::multiprecision::cpp_int state_space_dimension(int modes, int n_max) {
  if (modes < 0 || modes > 1000) {
    throw std::invalid_argument("state_space_dimension supports 0..1000 modes");
  }
  boost::multiprecision::cpp_int binom = 1;
  boost::multiprecision::cpp_int total = 0;
  int top = std::min(std::max(n_max, -1), modes);
  for (int k = 0; k <= top; ++k) {
    if (k > 0) {
      binom = binom * (modes - k + 1) / k;
    }
    total += binom;
  }
  return total;
}

}  // namespace gbs
