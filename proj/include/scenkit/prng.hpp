// Copyright 2026 The scenkit Authors
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

#ifndef SCENKIT_PRNG_HPP_
#define SCENKIT_PRNG_HPP_

// Counter-based generator built on the SplitMix64 finaliser. Every draw is a
// pure function of (master seed, counter), so streams are reproducible
// bit-for-bit in any language with 64-bit wrapping integer arithmetic.

#include <cstdint>

namespace scenkit::prng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kDrawKey = 0xD1B54A32D192ED03ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Per-point scenario seed. Injective in `ordinal` for a fixed master seed:
// master + (ordinal + 1) * kGolden is a bijection mod 2^64 and mix64 is too.
constexpr std::uint64_t point_seed(std::uint64_t master, std::uint64_t ordinal) {
  return mix64(master + (ordinal + 1) * kGolden);
}

constexpr std::uint64_t draw_bits(std::uint64_t master, std::uint64_t counter) {
  return mix64(mix64(master ^ kDrawKey) + (counter + 1) * kGolden);
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double unit_draw(std::uint64_t master, std::uint64_t counter) {
  return static_cast<double>(draw_bits(master, counter) >> 11) * 0x1.0p-53;
}

}  // namespace scenkit::prng

#endif  // SCENKIT_PRNG_HPP_
