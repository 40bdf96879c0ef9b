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

#ifndef GBS_SVG_H
#define GBS_SVG_H

#include <string>
#include <vector>

#include "gbs/table.h"

namespace gbs {

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Column holding x. When `x_hi` is set, x is the midpoint of the two columns.
  std::string x;
  std::string x_hi;
  /// Columns drawn as series; empty selects every column ending in `y_suffix`.
  std::vector<std::string> y;
  std::string y_suffix;
  bool log_y = false;
};

/// Static line plot of the table's columns. Meta lines of the table are carried over
/// into a leading XML comment. Throws ConfigError when a named column is missing.
std::string render_svg(const Table &table, const PlotSpec &spec);

}  // namespace gbs

#endif
