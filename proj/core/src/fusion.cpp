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

#include "roomtrack/fusion.hpp"

#include <cmath>

#include "roomtrack/error.hpp"
#include "roomtrack/parallel.hpp"

namespace roomtrack {

FusedCloud fuse_frame(const MultiViewFrame& frame, const RectifiedGeometry& geom,
                      int stride) {
  if (stride < 1) throw Error(Errc::invalid_argument, "fuse_frame: stride must be >= 1");
  const int V = static_cast<int>(frame.views.size());
  if (geom.rig.view_count() != V) {
    throw Error(Errc::dimension_mismatch, "fuse_frame: geometry does not cover all views");
  }
  if (!geom.depth_correction.empty() &&
      static_cast<int>(geom.depth_correction.size()) != V) {
    throw Error(Errc::dimension_mismatch, "fuse_frame: depth correction count mismatch");
  }

  FusedCloud out;
  out.t = frame.t;

  for (int v = 0; v < V; ++v) {
    const DepthMap& depth = frame.views[v].depth;
    const RgbImage& rgb = frame.views[v].rgb;
    const CameraIntrinsics& k = geom.rig.views[v].k;
    const CameraPose& p = geom.rig.views[v].p;
    const double m = geom.rig.scale;
    const DepthAffine ab =
        geom.depth_correction.empty() ? DepthAffine{} : geom.depth_correction[v];

    const int sampled_rows = (depth.height + stride - 1) / stride;
    struct Entry {
      Vec3 pos;
      FeatureDescriptor f;
      PointProvenance prov;
    };
    std::vector<std::vector<Entry>> buckets(static_cast<std::size_t>(sampled_rows));

    parallel_ranges(static_cast<std::size_t>(sampled_rows), 4,
                    [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const int row = static_cast<int>(i) * stride;
        auto& bucket = buckets[i];
        for (int col = 0; col < depth.width; col += stride) {
          const double d = depth.at(row, col);
          if (!depth_valid(d)) continue;
          const double dc = ab.a * d + ab.b;
          if (!(std::isfinite(dc) && dc > 0.0)) continue;
          Entry e;
          e.pos = metric_lift(m, to_room(p, backproject(k, pixel_center(row, col), dc)));
          e.f = descriptor_at(rgb, row, col);
          e.prov = {static_cast<std::uint16_t>(v), static_cast<std::uint16_t>(row),
                    static_cast<std::uint16_t>(col)};
          bucket.push_back(e);
        }
      }
    });

    for (const auto& bucket : buckets) {
      for (const auto& e : bucket) {
        out.points.push_back(e.pos);
        out.features.push_back(e.f);
        out.provenance.push_back(e.prov);
      }
    }
  }
  return out;
}

IndexedCloud build_index(FusedCloud cloud) {
  IndexedCloud out;
  out.index = KdTree(cloud.points);  // copies the point list into the tree
  out.cloud = std::move(cloud);
  return out;
}

}  // namespace roomtrack
