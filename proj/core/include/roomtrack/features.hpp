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

#include <Eigen/Dense>
#include <vector>

#include "roomtrack/image.hpp"

namespace roomtrack {

inline constexpr int kFeatureDim = 16;

// Unit-norm appearance descriptor: 3 mean-normalized color channels,
// an 8-bin gradient-orientation histogram, and 5 radial intensity rings,
// all over a 7x7 patch with clamped borders.
using FeatureDescriptor = Eigen::Matrix<float, kFeatureDim, 1>;

struct FeatureMap {
  int width = 0;
  int height = 0;
  std::vector<FeatureDescriptor> data;  // row-major

  const FeatureDescriptor& at(int row, int col) const {
    return data[static_cast<std::size_t>(row) * width + col];
  }
};

// Descriptor for a single pixel. Computed in double precision and
// L2-normalized before narrowing to float; a degenerate (all-zero)
// patch yields the uniform unit vector.
FeatureDescriptor descriptor_at(const RgbImage& img, int row, int col);

// Per-pixel descriptor map; parallelized over rows, identical to calling
// descriptor_at everywhere.
FeatureMap extract_features(const RgbImage& img);

}  // namespace roomtrack
