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

#include "gbs/sectioned_text.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gbs/common.h"

namespace gbs {

std::string trim(const std::string &text) {
  size_t b = text.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  size_t e = text.find_last_not_of(" \t\r\n");
  return text.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    out.push_back(trim(cur));
  }
  if (!text.empty() && text.back() == sep) {
    out.emplace_back();
  }
  return out;
}

double parse_double(const std::string &text, const std::string &what) {
  std::string t = trim(text);
  double value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(what + ": expected a number, got '" + t + "'");
  }
  return value;
}

long long parse_int(const std::string &text, const std::string &what) {
  std::string t = trim(text);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(what + ": expected an integer, got '" + t + "'");
  }
  return value;
}

SectionedText SectionedText::parse(const std::string &text, const std::string &origin) {
  SectionedText doc;
  doc.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    std::string where = origin + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(where + ": malformed section header '" + line + "'");
      }
      std::string name = trim(line.substr(1, line.size() - 2));
      if (doc.find(name) != nullptr) {
        throw ConfigError(where + ": duplicate section [" + name + "]");
      }
      doc.sections_.push_back({name, line_no, {}});
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    }
    if (doc.sections_.empty()) {
      throw ConfigError(where + ": key outside of any [section]");
    }
    Section &sec = doc.sections_.back();
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(where + ": empty key in [" + sec.name + "]");
    }
    for (const Entry &e : sec.entries) {
      if (e.key == key) {
        throw ConfigError(where + ": duplicate key '" + key + "' in [" + sec.name + "]");
      }
    }
    sec.entries.push_back({key, trim(line.substr(eq + 1)), line_no});
  }
  return doc;
}

SectionedText SectionedText::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

const SectionedText::Section *SectionedText::find(const std::string &name) const {
  for (const Section &s : sections_) {
    if (s.name == name) {
      return &s;
    }
  }
  return nullptr;
}

std::optional<std::string> SectionedText::get(const std::string &section, const std::string &key) const {
  used_.insert({section, key});
  const Section *s = find(section);
  if (s == nullptr) {
    return std::nullopt;
  }
  for (const Entry &e : s->entries) {
    if (e.key == key) {
      return e.value;
    }
  }
  return std::nullopt;
}

std::string SectionedText::require(const std::string &section, const std::string &key) const {
  auto v = get(section, key);
  if (!v) {
    throw ConfigError(origin_ + ": [" + section + "] is missing required key '" + key + "'");
  }
  return *v;
}

double SectionedText::get_double(const std::string &section, const std::string &key, double fallback) const {
  auto v = get(section, key);
  return v ? parse_double(*v, origin_ + ": [" + section + "] " + key) : fallback;
}

long long SectionedText::get_int(const std::string &section, const std::string &key, long long fallback) const {
  auto v = get(section, key);
  return v ? parse_int(*v, origin_ + ": [" + section + "] " + key) : fallback;
}

std::vector<double> SectionedText::get_doubles(const std::string &section, const std::string &key) const {
  std::vector<double> out;
  auto v = get(section, key);
  if (!v) {
    return out;
  }
  for (const std::string &part : split(*v, ',')) {
    out.push_back(parse_double(part, origin_ + ": [" + section + "] " + key));
  }
  return out;
}

void SectionedText::reject_unused() const {
  for (const Section &s : sections_) {
    for (const Entry &e : s.entries) {
      if (!used_.count({s.name, e.key})) {
        throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": unknown key '" + e.key + "' in [" +
                          s.name + "]");
      }
    }
  }
}

void SectionedText::reject_unknown_sections(const std::vector<std::string> &allowed) const {
  for (const Section &s : sections_) {
    bool ok = false;
    for (const std::string &a : allowed) {
      if (a.back() == '.' ? s.name.rfind(a, 0) == 0 && s.name.size() > a.size() : s.name == a) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError(origin_ + ":" + std::to_string(s.line) + ": unknown section [" + s.name + "]");
    }
  }
}

}  // namespace gbs
