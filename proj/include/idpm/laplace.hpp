//
// Copyright 2026 The idpm Authors
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
//

#ifndef IDPM_LAPLACE_HPP_
#define IDPM_LAPLACE_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "idpm/error.hpp"

namespace idpm {

// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Order-sensitive hash of a tuple of 64-bit words.
constexpr std::uint64_t hash_words(
    std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
  return h;
}

using NoiseEngine = std::mt19937_64;

// Independent engine for one (seed, attribute, cluster) triple, so results do
// not depend on the order in which clusters or attributes are processed.
inline NoiseEngine noise_stream(std::uint64_t seed, std::uint64_t attribute,
                                std::uint64_t cluster) {
  return NoiseEngine(hash_words({seed, attribute, cluster}));
}

// Uniform on the open interval (-1/2, 1/2) with 53-bit resolution.
template <class Engine>
double centered_uniform(Engine& engine) {
  constexpr double kScale = 0x1.0p-53;
  for (;;) {
    const std::uint64_t bits = static_cast<std::uint64_t>(engine()) >> 11;
    if (bits == 0) continue;  // would map to exactly -1/2
    return static_cast<double>(bits) * kScale - 0.5;
  }
}

// One Laplace(0, scale) draw by inversion:
//   u ~ U(-1/2, 1/2),  x = -scale * sgn(u) * ln(1 - 2|u|).
// The engine advances by the same amount for every scale, including 0.
template <class Engine>
double laplace_sample(Engine& engine, double scale) {
  require(scale >= 0.0 && std::isfinite(scale), ErrorCode::kParameter,
          "Laplace scale must be finite and non-negative");
  const double u = centered_uniform(engine);
  if (scale == 0.0) return 0.0;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

}  // namespace idpm

#endif  // IDPM_LAPLACE_HPP_
