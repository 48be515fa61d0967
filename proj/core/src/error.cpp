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

#include "roomtrack/error.hpp"

namespace roomtrack {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_depth: return "invalid-depth";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invariant_violation: return "invariant-violation";
    case Errc::insufficient_overlap: return "insufficient-overlap";
    case Errc::insufficient_anchor: return "insufficient-anchor";
    case Errc::isolated_query: return "isolated-query";
    case Errc::empty_cloud: return "empty-cloud";
    case Errc::undefined_metric: return "undefined-metric";
    case Errc::degenerate_alignment: return "degenerate-alignment";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::io_error: return "io-error";
  }
  return "unknown-error";
}

}  // namespace roomtrack
