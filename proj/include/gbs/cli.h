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

#ifndef GBS_CLI_H
#define GBS_CLI_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gbs/kernels.h"
#include "gbs/samplers.h"

namespace gbs::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitScale = 3;
inline constexpr int kExitNumerical = 4;

/// Settings for one invocation. Values come from an optional sectioned config file
/// (sections run, kernel, simulate, sample, validate, bench, haar) and are then
/// overridden by command-line flags.
struct RunConfig {
  std::string command;
  std::vector<std::string> specs;
  std::string out = ".";
  uint64_t seed = 0;
  int workers = 1;
  KernelOptions kernel;

  int max_modes = 14;

  std::vector<std::string> models{"ideal"};
  int64_t samples = 1000;
  int chains = 1;
  McmcOptions mcmc;
  std::optional<std::pair<int, int>> clicks_band;

  std::string sample_file;
  std::vector<std::string> overlays;
  int64_t n_reference = 20000;
  int hog_samples = 200;

  std::pair<int, int> k_range{4, 20};
  int repetitions = 3;
  /// "published" or the path of a sample file whose click histogram is costed.
  std::string histogram = "published";
  /// "fit" or "published".
  std::string cost_model = "fit";

  int haar_modes = 100;
};

/// Reads a config file into `config`. Unknown sections and keys are ConfigErrors.
void apply_config_file(const std::string &path, RunConfig &config);

/// "lo..hi" with 0 <= lo <= hi.
std::pair<int, int> parse_range(const std::string &text);

/// Runs one command line (args exclude the program name). Results go to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace gbs::cli

#endif
