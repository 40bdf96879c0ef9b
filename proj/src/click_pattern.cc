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

#include "gbs/click_pattern.h"

#include <algorithm>
#include <stdexcept>

namespace gbs {

ClickPattern::ClickPattern(std::vector<uint8_t> bits) : bits_(std::move(bits)) {
  for (uint8_t &b : bits_) {
    b = b != 0;
  }
}

ClickPattern ClickPattern::from_string(const std::string &text) {
  std::vector<uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("click pattern '" + text + "' must contain only 0 and 1");
    }
    bits.push_back(c == '1');
  }
  return ClickPattern(std::move(bits));
}

ClickPattern ClickPattern::from_index(uint64_t index, int modes) {
  if (modes > 64) {
    throw std::invalid_argument("index form supports at most 64 modes");
  }
  ClickPattern p(modes);
  for (int i = 0; i < modes; ++i) {
    p.bits_[i] = (index >> i) & 1;
  }
  return p;
}

ClickPattern ClickPattern::from_modes(std::span<const int> clicked, int modes) {
  ClickPattern p(modes);
  for (int i : clicked) {
    if (i < 0 || i >= modes) {
      throw std::out_of_range("clicked mode out of range");
    }
    p.bits_[i] = 1;
  }
  return p;
}

int ClickPattern::clicks() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<int> ClickPattern::clicked_modes() const {
  std::vector<int> out;
  for (int i = 0; i < modes(); ++i) {
    if (bits_[i]) {
      out.push_back(i);
    }
  }
  return out;
}

uint64_t ClickPattern::index() const {
  if (modes() > 64) {
    throw std::invalid_argument("index form supports at most 64 modes");
  }
  uint64_t v = 0;
  for (int i = 0; i < modes(); ++i) {
    v |= uint64_t{bits_[i]} << i;
  }
  return v;
}

std::string ClickPattern::to_string() const {
  std::string s(bits_.size(), '0');
  for (size_t i = 0; i < bits_.size(); ++i) {
    s[i] = bits_[i] ? '1' : '0';
  }
  return s;
}

}  // namespace gbs
