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

#include "gbs/experiment.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "gbs/haar.h"
#include "gbs/rng.h"
#include "gbs/sectioned_text.h"

namespace gbs {

const char *to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::kSmss:
      return "SMSS";
    case SourceKind::kTmss:
      return "TMSS";
    case SourceKind::kThermal:
      return "THERMAL";
    case SourceKind::kVacuum:
      return "VACUUM";
  }
  return "?";
}

SourceKind parse_source_kind(const std::string &text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
  if (t == "SMSS") {
    return SourceKind::kSmss;
  }
  if (t == "TMSS") {
    return SourceKind::kTmss;
  }
  if (t == "THERMAL") {
    return SourceKind::kThermal;
  }
  if (t == "VACUUM") {
    return SourceKind::kVacuum;
  }
  throw ConfigError("unknown source kind '" + text + "' (expected SMSS, TMSS, THERMAL or VACUUM)");
}

double SourceSpec::mean_photons_per_mode() const {
  switch (kind) {
    case SourceKind::kSmss:
    case SourceKind::kTmss:
      return std::sinh(r) * std::sinh(r);
    case SourceKind::kThermal:
      return mean_photons;
    case SourceKind::kVacuum:
      return 0;
  }
  return 0;
}

namespace {

void check_unit_interval(double v, const std::string &what) {
  if (!(v >= 0 && v <= 1)) {
    throw ConfigError(what + " = " + std::to_string(v) + " is outside [0, 1]");
  }
}

}  // namespace

void ExperimentSpec::validate() const {
  if (modes < 1) {
    throw ConfigError("experiment needs at least one mode");
  }
  if (unitary.rows() != modes || unitary.cols() != modes) {
    throw ConfigError("unitary must be " + std::to_string(modes) + "x" + std::to_string(modes));
  }
  if (!is_unitary(unitary, 1e-8)) {
    throw ConfigError("interferometer matrix is not unitary to 1e-8");
  }
  if (static_cast<int>(eta_network.size()) != modes || static_cast<int>(eta_detector.size()) != modes) {
    throw ConfigError("network and detector efficiencies need one entry per mode");
  }
  for (int i = 0; i < modes; ++i) {
    check_unit_interval(eta_network[i], "network efficiency");
    check_unit_interval(eta_detector[i], "detector efficiency");
  }
  std::set<int> used;
  for (size_t s = 0; s < sources.size(); ++s) {
    const SourceSpec &src = sources[s];
    std::string where = "source " + std::to_string(s);
    size_t want = src.kind == SourceKind::kTmss ? 2 : 1;
    if (src.modes.size() != want) {
      throw ConfigError(where + ": " + to_string(src.kind) + " needs " + std::to_string(want) + " mode(s)");
    }
    for (int mode : src.modes) {
      if (mode < 0 || mode >= modes) {
        throw ConfigError(where + ": mode " + std::to_string(mode) + " out of range");
      }
      if (!used.insert(mode).second) {
        throw ConfigError(where + ": mode " + std::to_string(mode) + " already fed by another source arm");
      }
    }
    if (!(src.r >= 0)) {
      throw ConfigError(where + ": squeezing r must be non-negative");
    }
    if (!(src.mean_photons >= 0)) {
      throw ConfigError(where + ": mean_photons must be non-negative");
    }
    check_unit_interval(src.eta_collect, where + " collection efficiency");
    check_unit_interval(src.purity, where + " purity");
  }
}

std::vector<double> ExperimentSpec::output_transmission() const {
  std::vector<double> out(modes);
  for (int i = 0; i < modes; ++i) {
    out[i] = eta_network[i] * eta_detector[i];
  }
  return out;
}

std::vector<double> ExperimentSpec::input_transmission() const {
  std::vector<double> out(modes, 1.0);
  for (const SourceSpec &src : sources) {
    for (int mode : src.modes) {
      out[mode] = src.eta_collect;
    }
  }
  return out;
}

bool ExperimentSpec::is_lossless(double tol) const {
  auto lossless = [tol](const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(), [tol](double e) { return e >= 1 - tol; });
  };
  return lossless(input_transmission()) && lossless(eta_network) && lossless(eta_detector);
}

std::string ExperimentSpec::hash() const {
  std::ostringstream canon;
  auto bits = [&canon](double v) { canon << std::hex << std::bit_cast<uint64_t>(v) << std::dec << ';'; };
  canon << "modes=" << modes << ';';
  for (const SourceSpec &s : sources) {
    canon << to_string(s.kind) << ':';
    for (int m : s.modes) {
      canon << m << ',';
    }
    bits(s.r);
    bits(s.phi);
    bits(s.mean_photons);
    bits(s.eta_collect);
    bits(s.purity);
  }
  for (int r = 0; r < unitary.rows(); ++r) {
    for (int c = 0; c < unitary.cols(); ++c) {
      bits(unitary(r, c).real());
      bits(unitary(r, c).imag());
    }
  }
  for (double e : eta_network) {
    bits(e);
  }
  for (double e : eta_detector) {
    bits(e);
  }
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

ExperimentSpec empty_spec(int modes) {
  ExperimentSpec spec;
  spec.modes = modes;
  spec.unitary = CMatrix::Identity(modes, modes);
  spec.eta_network.assign(modes, 1.0);
  spec.eta_detector.assign(modes, 1.0);
  return spec;
}

GaussianState build(const ExperimentSpec &spec) {
  spec.validate();
  GaussianState state = GaussianState::vacuum(spec.modes);
  for (const SourceSpec &src : spec.sources) {
    switch (src.kind) {
      case SourceKind::kSmss:
        state = state.with_smss(src.modes[0], src.r, src.phi);
        break;
      case SourceKind::kTmss:
        state = state.with_tmss(src.modes[0], src.modes[1], src.r, src.phi);
        break;
      case SourceKind::kThermal:
        state = state.with_thermal(src.modes[0], src.mean_photons);
        break;
      case SourceKind::kVacuum:
        break;
    }
  }
  state = state.apply_loss(spec.input_transmission());
  state = state.apply_unitary(spec.unitary);
  state = state.apply_loss(spec.eta_network);
  return state.apply_loss(spec.eta_detector);
}

ExperimentSpec thermal_equivalent(const ExperimentSpec &spec) {
  ExperimentSpec out = spec;
  out.sources.clear();
  for (const SourceSpec &src : spec.sources) {
    for (int mode : src.modes) {
      SourceSpec t;
      t.kind = SourceKind::kThermal;
      t.modes = {mode};
      t.mean_photons = src.mean_photons_per_mode();
      t.eta_collect = src.eta_collect;
      t.purity = src.purity;
      out.sources.push_back(t);
    }
  }
  return out;
}

std::string format_unitary_csv(const CMatrix &u) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (int r = 0; r < u.rows(); ++r) {
    for (int c = 0; c < u.cols(); ++c) {
      if (c > 0) {
        out << ',';
      }
      out << u(r, c).real() << ',' << u(r, c).imag();
    }
    out << '\n';
  }
  return out.str();
}

CMatrix parse_unitary_csv(const std::string &text, const std::string &origin) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::vector<double> row;
    for (const std::string &cell : split(line, ',')) {
      row.push_back(parse_double(cell, origin + ":" + std::to_string(line_no)));
    }
    rows.push_back(std::move(row));
  }
  int m = static_cast<int>(rows.size());
  if (m == 0) {
    throw ConfigError(origin + ": empty unitary file");
  }
  CMatrix u(m, m);
  for (int r = 0; r < m; ++r) {
    if (static_cast<int>(rows[r].size()) != 2 * m) {
      throw ConfigError(origin + ": row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                        " columns, expected " + std::to_string(2 * m));
    }
    for (int c = 0; c < m; ++c) {
      u(r, c) = Complex(rows[r][2 * c], rows[r][2 * c + 1]);
    }
  }
  return u;
}

CMatrix load_unitary_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open unitary file " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_unitary_csv(buf.str(), path);
}

void save_unitary_csv(const CMatrix &u, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write " + path);
  }
  out << format_unitary_csv(u);
}

namespace {

std::vector<double> per_mode(const SectionedText &doc, const std::string &section, int modes) {
  std::vector<double> v = doc.get_doubles(section, "eta");
  if (v.empty()) {
    return std::vector<double>(modes, 1.0);
  }
  if (v.size() == 1) {
    return std::vector<double>(modes, v[0]);
  }
  if (static_cast<int>(v.size()) != modes) {
    throw ConfigError(doc.origin() + ": [" + section + "] eta needs 1 or " + std::to_string(modes) + " values");
  }
  return v;
}

}  // namespace

ExperimentSpec parse_spec(const std::string &text, const std::string &origin, const std::string &base_dir) {
  SectionedText doc = SectionedText::parse(text, origin);
  doc.reject_unknown_sections({"network", "detector", "source."});
  if (doc.find("network") == nullptr) {
    throw ConfigError(origin + ": missing [network] section");
  }
  ExperimentSpec spec;
  auto unitary_file = doc.get("network", "unitary_file");
  auto haar_seed = doc.get("network", "haar_seed");
  long long modes = doc.get_int("network", "modes", -1);
  if (unitary_file && haar_seed) {
    throw ConfigError(origin + ": [network] sets both unitary_file and haar_seed");
  }
  if (unitary_file) {
    std::filesystem::path p(*unitary_file);
    if (p.is_relative() && !base_dir.empty()) {
      p = std::filesystem::path(base_dir) / p;
    }
    spec.unitary = load_unitary_csv(p.string());
    if (modes >= 0 && modes != spec.unitary.rows()) {
      throw ConfigError(origin + ": [network] modes disagrees with the unitary file");
    }
    modes = spec.unitary.rows();
  } else {
    if (modes < 1) {
      throw ConfigError(origin + ": [network] needs modes when no unitary_file is given");
    }
    spec.unitary = haar_seed ? haar_unitary(static_cast<int>(modes),
                                            static_cast<uint64_t>(parse_int(*haar_seed, origin + ": haar_seed")))
                             : CMatrix::Identity(modes, modes);
  }
  spec.modes = static_cast<int>(modes);
  spec.eta_network = per_mode(doc, "network", spec.modes);
  spec.eta_detector = per_mode(doc, "detector", spec.modes);

  std::vector<std::pair<long long, const SectionedText::Section *>> source_sections;
  for (const auto &sec : doc.sections()) {
    if (sec.name.rfind("source.", 0) == 0) {
      source_sections.emplace_back(parse_int(sec.name.substr(7), origin + ": section [" + sec.name + "]"), &sec);
    }
  }
  std::sort(source_sections.begin(), source_sections.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  for (const auto &[index, sec] : source_sections) {
    const std::string &name = sec->name;
    SourceSpec src;
    try {
      src.kind = parse_source_kind(doc.require(name, "kind"));
      auto mode_list = doc.get(name, "modes");
      auto single = doc.get(name, "mode");
      if (mode_list && single) {
        throw ConfigError("both mode and modes given");
      }
      auto text_modes = mode_list ? mode_list : single;
      if (!text_modes) {
        throw ConfigError("missing modes");
      }
      for (const std::string &part : split(*text_modes, ',')) {
        src.modes.push_back(static_cast<int>(parse_int(part, "mode index")));
      }
      src.r = doc.get_double(name, "r", 0.0);
      src.phi = doc.get_double(name, "phi", 0.0);
      src.mean_photons = doc.get_double(name, "mean_photons", 0.0);
      src.eta_collect = doc.get_double(name, "eta", 1.0);
      src.purity = doc.get_double(name, "purity", 1.0);
      if (src.kind == SourceKind::kThermal && src.r != 0) {
        throw ConfigError("THERMAL sources take mean_photons, not r");
      }
      if (src.kind != SourceKind::kThermal && src.mean_photons != 0) {
        throw ConfigError("mean_photons applies to THERMAL sources only");
      }
    } catch (const ConfigError &e) {
      std::string what = e.what();
      if (what.starts_with(origin + ":")) {
        throw;
      }
      throw ConfigError(origin + ":" + std::to_string(sec->line) + ": [" + name + "] " + what);
    }
    spec.sources.push_back(src);
  }
  doc.reject_unused();
  try {
    spec.validate();
  } catch (const ConfigError &e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return spec;
}

ExperimentSpec load_spec(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open experiment file " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str(), path, std::filesystem::path(path).parent_path().string());
}

namespace {

std::string join(const std::vector<double> &v) {
  bool uniform = std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  std::ostringstream out;
  out << std::setprecision(17);
  if (uniform && !v.empty()) {
    out << v.front();
    return out.str();
  }
  for (size_t i = 0; i < v.size(); ++i) {
    out << (i ? "," : "") << v[i];
  }
  return out.str();
}

}  // namespace

void save_spec(const ExperimentSpec &spec, const std::string &path) {
  spec.validate();
  std::filesystem::path p(path);
  std::filesystem::path unitary_path = p.parent_path() / (p.stem().string() + ".unitary.csv");
  save_unitary_csv(spec.unitary, unitary_path.string());
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write " + path);
  }
  out << std::setprecision(17);
  out << "[network]\n";
  out << "unitary_file = " << unitary_path.filename().string() << "\n";
  out << "eta = " << join(spec.eta_network) << "\n\n";
  out << "[detector]\n";
  out << "eta = " << join(spec.eta_detector) << "\n";
  for (size_t s = 0; s < spec.sources.size(); ++s) {
    const SourceSpec &src = spec.sources[s];
    out << "\n[source." << s << "]\n";
    out << "kind = " << to_string(src.kind) << "\n";
    out << "modes = ";
    for (size_t i = 0; i < src.modes.size(); ++i) {
      out << (i ? "," : "") << src.modes[i];
    }
    out << "\n";
    if (src.kind == SourceKind::kThermal) {
      out << "mean_photons = " << src.mean_photons << "\n";
    } else if (src.kind != SourceKind::kVacuum) {
      out << "r = " << src.r << "\n";
      out << "phi = " << src.phi << "\n";
    }
    out << "eta = " << src.eta_collect << "\n";
    out << "purity = " << src.purity << "\n";
  }
}

ExperimentSpec synthetic_device(uint64_t seed, int sources, int modes) {
  if (2 * sources > modes) {
    throw std::invalid_argument("not enough modes for the requested TMSS sources");
  }
  ExperimentSpec spec = empty_spec(modes);
  Rng rng(seed, 0x5352);
  for (int s = 0; s < sources; ++s) {
    SourceSpec src;
    src.kind = SourceKind::kTmss;
    src.modes = {2 * s, 2 * s + 1};
    src.r = 1.0 + 0.8 * rng.uniform();
    src.phi = 2 * std::numbers::pi * rng.uniform() - std::numbers::pi;
    src.eta_collect = 0.628;
    src.purity = 0.938;
    spec.sources.push_back(src);
  }
  spec.unitary = haar_unitary(modes, seed);
  spec.eta_network.assign(modes, 0.977);
  spec.eta_detector.assign(modes, 0.81);
  return spec;
}

ExperimentSpec tmss_device(int modes, std::vector<double> r, std::vector<double> phi, uint64_t haar_seed,
                           double eta_out) {
  if (r.size() != phi.size() || 2 * r.size() > static_cast<size_t>(modes)) {
    throw std::invalid_argument("tmss_device: r/phi mismatch or not enough modes");
  }
  ExperimentSpec spec = empty_spec(modes);
  for (size_t s = 0; s < r.size(); ++s) {
    SourceSpec src;
    src.kind = SourceKind::kTmss;
    src.modes = {static_cast<int>(2 * s), static_cast<int>(2 * s + 1)};
    src.r = r[s];
    src.phi = phi[s];
    spec.sources.push_back(src);
  }
  spec.unitary = haar_unitary(modes, haar_seed);
  spec.eta_network.assign(modes, 1.0);
  spec.eta_detector.assign(modes, eta_out);
  spec.validate();
  return spec;
}

}  // namespace gbs
