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

#include "gbs/table.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gbs/common.h"
#include "gbs/sectioned_text.h"

namespace gbs {

void Table::add_row(std::vector<std::string> row) {
  if (!header.empty() && row.size() != header.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, header has " +
                                std::to_string(header.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_table(const Table &table) {
  std::string out;
  for (const auto &[k, v] : table.meta) {
    out += "# " + k + "=" + v + "\n";
  }
  auto line = [&](const std::vector<std::string> &cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) {
        out += ',';
      }
      out += cells[i];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto &row : table.rows) {
    line(row);
  }
  return out;
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write failed for " + path);
  }
}

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_table(const Table &table, const std::string &path) {
  write_text(path, format_table(table));
}

Table parse_table(const std::string &text, const std::string &origin) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0 && !have_header) {
      size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(origin + ": meta line without '='");
      }
      t.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    std::vector<std::string> cells = split(line, ',');
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != t.header.size()) {
        throw ConfigError(origin + ": row width does not match header");
      }
      t.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) {
    throw ConfigError(origin + ": no header line");
  }
  return t;
}

Table read_table(const std::string &path) {
  return parse_table(read_text(path), path);
}

}  // namespace gbs
