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

#ifndef GBS_TABLE_H
#define GBS_TABLE_H

#include <string>
#include <utility>
#include <vector>

namespace gbs {

/// A CSV table with "# key=value" provenance lines written above the header.
struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

/// Shortest round-trip decimal form; the same double always prints the same way.
std::string format_number(double x);
std::string format_table(const Table &table);
void write_table(const Table &table, const std::string &path);
/// Parses text written by format_table. Meta lines are kept, the header must be present.
Table parse_table(const std::string &text, const std::string &origin);
Table read_table(const std::string &path);

/// Writes text to a file, throwing std::runtime_error on failure.
void write_text(const std::string &path, const std::string &text);
std::string read_text(const std::string &path);

}  // namespace gbs

#endif
