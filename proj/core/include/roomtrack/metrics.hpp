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
#include <utility>
#include <vector>

#include "roomtrack/geometry.hpp"
#include "roomtrack/image.hpp"
#include "roomtrack/rectify.hpp"

namespace roomtrack {

struct MetricConfig {
  // Doubling ladder of 3D distance thresholds, meters.
  std::vector<double> thresholds = {0.01, 0.02, 0.04, 0.08, 0.16};
  double tau_v = 0.5;
};

struct TrackEval {
  double aj = 0.0;         // [0, 100]
  double delta_avg = 0.0;  // [0, 100]
  double oa = 0.0;         // [0, 100]
  double mte = 0.0;        // meters
  std::vector<double> thresholds;
};

struct DepthEval {
  double abs_rel = 0.0;
  double rmse = 0.0;  // meters
  std::size_t valid_pixels = 0;
};

struct ConsistencyEval {
  double mean = 0.0;    // meters
  double median = 0.0;  // meters
  std::size_t samples = 0;
};

// Fraction of frames whose predicted visibility (v >= tau_v) matches the
// ground-truth flag, as a percentage.
double occlusion_accuracy(const std::vector<double>& pred_vis,
                          const std::vector<std::uint8_t>& gt_vis, double tau_v);

// Per threshold: fraction of GT-visible frames with position error
// strictly below it; averaged over thresholds, as a percentage.
double delta_avg(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt,
                 const std::vector<std::uint8_t>& gt_vis,
                 const std::vector<double>& thresholds);

// Threshold-averaged Jaccard of (position within threshold) AND (visibility
// agreement): TP/(TP+FP+FN) per threshold, averaged. An empty denominator
// counts as perfect agreement (1).
double average_jaccard(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt,
                       const std::vector<double>& pred_vis,
                       const std::vector<std::uint8_t>& gt_vis,
                       const std::vector<double>& thresholds, double tau_v);

// Median position error over GT-visible frames; the median of an even
// count is the mean of the two middle values.
double median_trajectory_error(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt,
                               const std::vector<std::uint8_t>& gt_vis);

// One track's aligned prediction/ground-truth arrays (same frame range).
struct TrackComparison {
  std::vector<Vec3> pred;
  std::vector<double> pred_vis;
  std::vector<Vec3> gt;
  std::vector<std::uint8_t> gt_vis;
};

TrackEval evaluate_track(const TrackComparison& c, const MetricConfig& cfg);
// Per-track metrics averaged uniformly across tracks.
TrackEval evaluate_tracks(const std::vector<TrackComparison>& tracks,
                          const MetricConfig& cfg);

// AbsRel and RMSE over jointly valid pixels. Throws undefined-metric when
// no pixel is jointly valid.
DepthEval depth_eval(const DepthMap& pred, const DepthMap& gt);

// Accumulates depth_eval sums across several map pairs.
class DepthEvalAccumulator {
 public:
  void add(const DepthMap& pred, const DepthMap& gt);
  DepthEval result() const;  // throws undefined-metric when empty

 private:
  double abs_rel_sum_ = 0.0;
  double sq_sum_ = 0.0;
  std::size_t count_ = 0;
};

// Mean and median of |cross-view residual| on the given sample set.
ConsistencyEval consistency_eval(const RigCalibration& rig,
                                 const std::vector<DepthAffine>& corrections,
                                 const MultiViewFrame& frame,
                                 const std::vector<std::vector<std::pair<int, int>>>& samples);

// Similarity transform: x -> scale * (r * x) + t.
struct Similarity {
  double scale = 1.0;
  Mat3 r = Mat3::Identity();
  Vec3 t = Vec3::Zero();
  double rms = 0.0;  // alignment residual over the fitted correspondences

  Vec3 apply(const Vec3& x) const { return scale * (r * x) + t; }
  Similarity inverse() const;
};

// Least-squares similarity aligning source onto target (orthogonal
// Procrustes with scale). Throws degenerate-alignment for fewer than 3
// correspondences or a collinear configuration.
Similarity align_frames(const std::vector<Vec3>& source, const std::vector<Vec3>& target);

}  // namespace roomtrack
