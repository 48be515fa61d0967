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

#include <cstddef>
#include <functional>

namespace roomtrack {

/// Process-wide worker count used by parallel_for. 0 selects
/// hardware_concurrency. Results never depend on this value: work is cut
/// into chunks whose boundaries depend only on the problem size, and every
/// chunk writes disjoint output.
void set_max_threads(int n);
int max_threads();

/// Runs fn(i) for i in [0, n). fn must only write to slots owned by i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Runs fn(begin, end) over fixed-size ranges of [0, n). Range boundaries
/// depend only on n, so per-range accumulators reduce deterministically.
void parallel_ranges(std::size_t n, std::size_t grain,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace roomtrack
