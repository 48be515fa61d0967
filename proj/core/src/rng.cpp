// Copyright 2026 The Roomtrack Authors
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

#include "roomtrack/rng.hpp"

#include <cmath>
#include <numbers>

#include "roomtrack/error.hpp"

namespace roomtrack {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t index) const {
  return mix64(seed_ ^ mix64(stream_ ^ mix64(index)));
}

double CounterRng::uniform(std::uint64_t index) const {
  return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(std::uint64_t index, double lo, double hi) const {
  return lo + (hi - lo) * uniform(index);
}

double CounterRng::gaussian(std::uint64_t index) const {
  // Two independent keys derived from one logical index.
  const std::uint64_t k1 = bits(index * 2);
  const std::uint64_t k2 = bits(index * 2 + 1);
  // Avoid log(0): shift u1 into (0, 1].
  const double u1 =
      (static_cast<double>(k1 >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(k2 >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::uniform_index(std::uint64_t index, std::uint64_t n) const {
  if (n == 0) throw Error(Errc::invalid_argument, "uniform_index: n must be > 0");
  // Bias is negligible for n far below 2^64; acceptable for sampling use.
  return bits(index) % n;
}

}  // namespace roomtrack
