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

#ifndef GBS_CLICK_PATTERN_H
#define GBS_CLICK_PATTERN_H

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gbs {

/// Threshold-detector outcome: bit i set means detector i clicked.
class ClickPattern {
 public:
  ClickPattern() = default;
  explicit ClickPattern(int modes) : bits_(modes, 0) {}
  explicit ClickPattern(std::vector<uint8_t> bits);
  /// '0'/'1' characters, character i is detector i.
  static ClickPattern from_string(const std::string &text);
  /// Bit i of `index` is detector i; needs modes <= 64.
  static ClickPattern from_index(uint64_t index, int modes);
  static ClickPattern from_modes(std::span<const int> clicked, int modes);

  int modes() const { return static_cast<int>(bits_.size()); }
  bool operator[](int i) const { return bits_[i] != 0; }
  void set(int i, bool value = true) { bits_[i] = value ? 1 : 0; }
  int clicks() const;
  std::vector<int> clicked_modes() const;
  uint64_t index() const;
  std::string to_string() const;

  auto operator<=>(const ClickPattern &) const = default;

 private:
  std::vector<uint8_t> bits_;
};

}  // namespace gbs

#endif
