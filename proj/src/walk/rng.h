// Copyright 2026 The kgwalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KGWALK_WALK_RNG_H_
#define KGWALK_WALK_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

#include "common/hash.h"

namespace kgwalk {

// Deterministic random source: std::mt19937_64 (its output sequence is fixed
// by the C++ standard) plus a bounded draw done here by rejection sampling,
// so results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed), seed_(seed) {}

  uint64_t seed() const { return seed_; }
  uint64_t Next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  uint64_t Uniform(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    while (true) {
      const uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::mt19937_64 engine_;
  uint64_t seed_;
};

// Per-item seed: splitmix64(global_seed XOR fnv1a64(item_id)).
constexpr uint64_t ItemSeed(uint64_t global_seed, std::string_view item_id) {
  return SplitMix64(global_seed ^ Fnv1a64(item_id));
}

// Seed for the n-th retry of an item; attempt 0 is the item seed itself.
constexpr uint64_t ReseedAttempt(uint64_t item_seed, uint32_t attempt) {
  return attempt == 0 ? item_seed
                      : SplitMix64(item_seed + 0x9e3779b97f4a7c15ULL * attempt);
}

}  // namespace kgwalk

#endif  // KGWALK_WALK_RNG_H_
