// Copyright 2026 The Usersim Authors.
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

#ifndef USERSIM_RNG_H_
#define USERSIM_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace usersim {

// Seeded random stream. Conversions to doubles and bounded integers are done
// here rather than through <random> distributions so that streams are
// bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double UniformDouble();

  // Uniform on {0, ..., n-1}. n must be positive.
  size_t UniformIndex(size_t n);

  bool Bernoulli(double p) { return UniformDouble() < p; }

  // Standard normal via Box-Muller.
  double Normal();

  uint64_t seed() const { return seed_; }

  // Counter-based child stream: depends only on this stream's seed and the
  // given counters, never on how many draws were made so far.
  Rng Split(uint64_t stream) const { return Rng(Derive(seed_, stream)); }
  Rng Split(std::string_view label, uint64_t index) const {
    return Rng(Derive(Derive(seed_, HashLabel(label)), index));
  }

  static uint64_t Derive(uint64_t seed, uint64_t stream);
  static uint64_t HashLabel(std::string_view label);

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
uint64_t MixBits(uint64_t x);

}  // namespace usersim

#endif  // USERSIM_RNG_H_
