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

#ifndef GBS_RNG_H
#define GBS_RNG_H

#include <cstdint>
#include <random>

namespace gbs {

/// Seedable, splittable random source.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and does
/// its own conversions to floating point, so a (seed, stream) pair yields the same
/// draws on every conforming toolchain. Substreams are derived by hashing
/// (seed, stream index) with splitmix64.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0);

  /// Independent generator for substream `index`, derived from this generator's seed.
  Rng split(uint64_t index) const;

  uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  uint64_t below(uint64_t n);
  double normal();

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0;
};

uint64_t splitmix64(uint64_t x);

}  // namespace gbs

#endif
