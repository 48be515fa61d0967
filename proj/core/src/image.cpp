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

#include "roomtrack/image.hpp"

namespace roomtrack {

std::size_t DepthMap::count_valid() const {
  std::size_t n = 0;
  for (double d : data) {
    if (depth_valid(d)) ++n;
  }
  return n;
}

std::optional<double> sample_depth_bilinear(const DepthMap& d, double ux, double uy) {
  const double gx = ux - 0.5;
  const double gy = uy - 0.5;
  const int x0 = static_cast<int>(std::floor(gx));
  const int y0 = static_cast<int>(std::floor(gy));
  const int x1 = x0 + 1;
  const int y1 = y0 + 1;
  if (x0 < 0 || y0 < 0 || x1 >= d.width || y1 >= d.height) return std::nullopt;

  const double d00 = d.at(y0, x0);
  const double d01 = d.at(y0, x1);
  const double d10 = d.at(y1, x0);
  const double d11 = d.at(y1, x1);
  if (!depth_valid(d00) || !depth_valid(d01) || !depth_valid(d10) || !depth_valid(d11)) {
    return std::nullopt;
  }

  const double fx = gx - x0;
  const double fy = gy - y0;
  const double top = d00 * (1.0 - fx) + d01 * fx;
  const double bot = d10 * (1.0 - fx) + d11 * fx;
  return top * (1.0 - fy) + bot * fy;
}

}  // namespace roomtrack
