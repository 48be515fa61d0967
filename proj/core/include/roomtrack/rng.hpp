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

#pragma once

#include <cstdint>

namespace roomtrack {

// Counter-based generator: every draw is a pure function of
// (seed, stream, index), so values are independent of call order
// and of how work is split across threads.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  // 64-bit value for draw `index` on this stream.
  std::uint64_t bits(std::uint64_t index) const;

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform(std::uint64_t index) const;

  // Uniform in [lo, hi).
  double uniform(std::uint64_t index, double lo, double hi) const;

  // Standard normal via Box-Muller; consumes two derived keys per call.
  double gaussian(std::uint64_t index) const;

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t index, std::uint64_t n) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

// SplitMix64 finalizer; building block for CounterRng and hash-keyed noise.
std::uint64_t mix64(std::uint64_t x);

}  // namespace roomtrack
