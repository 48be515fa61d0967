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

#include <stdexcept>
#include <string>

namespace roomtrack {

/// Failure categories surfaced by the library. Each maps to one contract
/// violation so callers (and tests) can match on the kind, not the message.
enum class Errc {
  invalid_depth,
  invalid_argument,
  invariant_violation,
  insufficient_overlap,
  insufficient_anchor,
  isolated_query,
  empty_cloud,
  undefined_metric,
  degenerate_alignment,
  dimension_mismatch,
  io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace roomtrack
