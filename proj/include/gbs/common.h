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

#ifndef GBS_COMMON_H
#define GBS_COMMON_H

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace gbs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr const char *kVersion = "0.3.0";

/// A computation exceeds a configured size limit (too many clicks, modes or photons).
class ScaleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The numbers stopped making sense: a matrix that must be positive definite is not,
/// or an accumulated error swamps the result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-fatal diagnostics go through here so tools can silence or capture them.
/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  void merge(const CompensatedSum &other);
  double value() const { return sum_ + compensation_; }
  double compensation() const { return compensation_; }
  double abs_total() const { return abs_total_; }

 private:
  double sum_ = 0;
  double compensation_ = 0;
  double abs_total_ = 0;
};

void warn(const std::string &message);
void set_warning_sink(void (*sink)(const std::string &));

/// Largest absolute entry of m.
double max_abs(const CMatrix &m);

}  // namespace gbs

#endif
