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
#include <vector>

#include "roomtrack/features.hpp"
#include "roomtrack/geometry.hpp"
#include "roomtrack/kdtree.hpp"
#include "roomtrack/rectify.hpp"

namespace roomtrack {

struct PointProvenance {
  std::uint16_t view = 0;
  std::uint16_t row = 0;
  std::uint16_t col = 0;
};

// All views of one frame lifted into the metric room frame, with per-point
// appearance descriptors. Points are ordered by (view, row, col) ascending.
struct FusedCloud {
  int t = 0;
  std::vector<Vec3> points;
  std::vector<FeatureDescriptor> features;
  std::vector<PointProvenance> provenance;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// Lift every stride-th valid-depth pixel of every view. Corrected depth
// (a*d + b) must itself be valid for the pixel to contribute.
FusedCloud fuse_frame(const MultiViewFrame& frame, const RectifiedGeometry& geom,
                      int stride = 2);

// Fused cloud plus its spatial index.
struct IndexedCloud {
  FusedCloud cloud;
  KdTree index;
};

IndexedCloud build_index(FusedCloud cloud);

}  // namespace roomtrack
