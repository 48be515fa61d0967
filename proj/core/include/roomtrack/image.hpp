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

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace roomtrack {

// Depth values are valid iff finite and strictly positive.
inline bool depth_valid(double d) { return std::isfinite(d) && d > 0.0; }

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // row-major RGB triples

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(3) * w * h, 0) {}

  std::uint8_t at(int row, int col, int channel) const {
    return data[3 * (static_cast<std::size_t>(row) * width + col) + channel];
  }
  std::uint8_t& at(int row, int col, int channel) {
    return data[3 * (static_cast<std::size_t>(row) * width + col) + channel];
  }
  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height && col >= 0 && col < width;
  }
};

struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // row-major, meters

  DepthMap() = default;
  DepthMap(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double at(int row, int col) const {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  double& at(int row, int col) {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  bool valid_at(int row, int col) const { return depth_valid(at(row, col)); }
  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height && col >= 0 && col < width;
  }
  std::size_t count_valid() const;
};

struct ViewImages {
  RgbImage rgb;
  DepthMap depth;
};

struct MultiViewFrame {
  int t = 0;
  std::vector<ViewImages> views;
};

// Bilinear depth at continuous pixel coordinates (pixel-center convention:
// sample k sits at coordinate k + 0.5). Returns nothing unless all four
// neighboring samples are in bounds and hold valid depth, so interpolation
// never mixes values across a validity boundary.
std::optional<double> sample_depth_bilinear(const DepthMap& d, double ux, double uy);

}  // namespace roomtrack
