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

#include "gbs/common.h"

#include <cmath>
#include <iostream>

namespace gbs {

namespace {

void default_sink(const std::string &message) {
  std::cerr << "warning: " << message << "\n";
}

void (*g_sink)(const std::string &) = default_sink;

}  // namespace

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
  abs_total_ += std::abs(x);
}

void CompensatedSum::merge(const CompensatedSum &other) {
  add(other.sum_);
  compensation_ += other.compensation_;
  // add() counted |other.sum_|; replace it with the other side's own total.
  abs_total_ += other.abs_total_ - std::abs(other.sum_);
}

void warn(const std::string &message) {
  if (g_sink != nullptr) {
    g_sink(message);
  }
}

void set_warning_sink(void (*sink)(const std::string &)) {
  g_sink = sink;
}

double max_abs(const CMatrix &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace gbs
