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

#ifndef GBS_EXPERIMENT_H
#define GBS_EXPERIMENT_H

#include <cstdint>
#include <string>
#include <vector>

#include "gbs/common.h"
#include "gbs/gaussian_state.h"

namespace gbs {

enum class SourceKind { kSmss, kTmss, kThermal, kVacuum };

const char *to_string(SourceKind kind);
SourceKind parse_source_kind(const std::string &text);

struct SourceSpec {
  SourceKind kind = SourceKind::kVacuum;
  /// Interferometer input modes this source feeds: two for TMSS, one otherwise.
  std::vector<int> modes;
  double r = 0;
  double phi = 0;
  double mean_photons = 0;  // THERMAL only
  double eta_collect = 1;
  double purity = 1;  // recorded, not modeled

  /// Mean photon number delivered into each of this source's modes (before loss).
  double mean_photons_per_mode() const;
};

/// Device description: sources, interferometer and loss budget.
///
/// Transmission is applied in the order collection (per source) -> interferometer
/// -> network (per output mode) -> detector (per output mode).
struct ExperimentSpec {
  int modes = 0;
  std::vector<SourceSpec> sources;
  CMatrix unitary;
  std::vector<double> eta_network;
  std::vector<double> eta_detector;

  /// Throws ConfigError on any broken invariant.
  void validate() const;
  /// Per-mode product eta_network * eta_detector.
  std::vector<double> output_transmission() const;
  /// Per-input-mode collection efficiency (1 where no source sits).
  std::vector<double> input_transmission() const;
  bool is_lossless(double tol = 1e-15) const;
  /// Stable 64-bit FNV-1a hash of the canonical serialization, as 16 hex digits.
  std::string hash() const;
};

/// Lossless identity-interferometer spec with no sources.
ExperimentSpec empty_spec(int modes);

/// Final pre-detection Gaussian state.
GaussianState build(const ExperimentSpec &spec);

/// Every squeezed source replaced by thermal light of the same mean photon number
/// in each mode it feeds.
ExperimentSpec thermal_equivalent(const ExperimentSpec &spec);

/// Reads the sectioned experiment format. Relative unitary_file paths resolve
/// against the directory of `path`.
ExperimentSpec load_spec(const std::string &path);
ExperimentSpec parse_spec(const std::string &text, const std::string &origin, const std::string &base_dir);
/// Writes the experiment (unitary stored next to it as `<stem>.unitary.csv`).
void save_spec(const ExperimentSpec &spec, const std::string &path);

/// CSV with one row per matrix row and 2m columns (re, im interleaved).
CMatrix load_unitary_csv(const std::string &path);
void save_unitary_csv(const CMatrix &u, const std::string &path);
std::string format_unitary_csv(const CMatrix &u);
CMatrix parse_unitary_csv(const std::string &text, const std::string &origin);

/// Representative 100-mode, 25-source synthetic device: TMSS on mode pairs
/// (2s, 2s+1), r uniform in [1.0, 1.8], phi uniform, collection 0.628, network 0.977,
/// detector 0.81, Haar interferometer. Not the measured device parameters.
ExperimentSpec synthetic_device(uint64_t seed, int sources = 25, int modes = 100);

/// Lossless r/phi-squeezed TMSS sources on pairs (2s, 2s+1) of an m-mode Haar interferometer,
/// followed by uniform output transmission.
ExperimentSpec tmss_device(int modes, std::vector<double> r, std::vector<double> phi, uint64_t haar_seed,
                           double eta_out);

}  // namespace gbs

#endif
