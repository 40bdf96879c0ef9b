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

#ifndef GBS_SECTIONED_TEXT_H
#define GBS_SECTIONED_TEXT_H

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gbs {

/// Line-oriented "[section]" / "key = value" text, '#' comments.
///
/// Used for both experiment descriptions and run configurations. Every lookup is
/// tracked so callers can reject keys nobody asked for.
class SectionedText {
 public:
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };
  struct Section {
    std::string name;
    int line = 0;
    std::vector<Entry> entries;
  };

  static SectionedText parse(const std::string &text, const std::string &origin = "<text>");
  static SectionedText load(const std::string &path);

  const std::vector<Section> &sections() const { return sections_; }
  const Section *find(const std::string &name) const;

  std::optional<std::string> get(const std::string &section, const std::string &key) const;
  std::string require(const std::string &section, const std::string &key) const;
  double get_double(const std::string &section, const std::string &key, double fallback) const;
  long long get_int(const std::string &section, const std::string &key, long long fallback) const;
  /// Comma-separated doubles.
  std::vector<double> get_doubles(const std::string &section, const std::string &key) const;

  /// Throws ConfigError naming the first key that was never looked up.
  void reject_unused() const;
  /// Throws ConfigError for a section name outside `allowed` (prefix match when the
  /// allowed name ends in '.').
  void reject_unknown_sections(const std::vector<std::string> &allowed) const;

  const std::string &origin() const { return origin_; }

 private:
  std::string origin_;
  std::vector<Section> sections_;
  mutable std::set<std::pair<std::string, std::string>> used_;
};

double parse_double(const std::string &text, const std::string &what);
long long parse_int(const std::string &text, const std::string &what);
std::vector<std::string> split(const std::string &text, char sep);
std::string trim(const std::string &text);

}  // namespace gbs

#endif
