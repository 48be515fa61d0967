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
#include <iosfwd>
#include <utility>
#include <vector>

#include "roomtrack/geometry.hpp"
#include "roomtrack/image.hpp"

namespace roomtrack {

// Per-view depth correction, applied as d_corrected = a * d + b.
struct DepthAffine {
  double a = 1.0;
  double b = 0.0;
};

// Optional per-view calibration evidence. RGB-D observations are always
// present; these flags say which of them may be trusted as priors
// (intrinsics, pose) or as a metric anchor (depth).
struct HintSet {
  struct ViewHints {
    bool has_intrinsics = false;
    CameraIntrinsics k;
    bool has_pose = false;
    CameraPose p;
    bool has_depth = false;
  };
  std::vector<ViewHints> views;

  bool any_pose() const;
  bool any_depth() const;
};

struct RectifiedGeometry {
  RigCalibration rig;  // refined intrinsics/poses plus global scale m
  std::vector<DepthAffine> depth_correction;
  // Corrected depth per frame per view, first index time.
  std::vector<std::vector<DepthMap>> per_frame_depth;
  bool converged = true;
  bool scale_observable = true;
};

struct RectifierConfig {
  int max_iterations = 60;
  double initial_damping = 1e-4;
  double damping_up = 10.0;
  double damping_down = 1.0 / 3.0;
  double tolerance = 1e-10;        // relative cost decrease
  double huber_delta = 0.05;       // meters
  int samples_per_view = 512;      // stratified samples per source view
  double lambda_intrinsics = 1e-4;
  double lambda_pose = 1e-1;
  double lambda_depth = 1e-3;
  std::uint64_t seed = 0;
  int max_rejected_steps = 10;     // consecutive rejected steps before giving up
  std::ostream* trace = nullptr;   // optional per-iteration text trace

  void validate() const;
};

struct ResidualSample {
  int source_view = 0;
  Vec2 pixel = Vec2::Zero();  // source pixel center
  int target_view = 0;
  double residual = 0.0;      // meters, metric scale applied
};

// Stratified selection of `count` valid-depth pixel coordinates (row, col).
// Deterministic in (seed, view); cells without valid pixels are skipped, so
// fewer than `count` samples may be returned.
std::vector<std::pair<int, int>> stratified_samples(const DepthMap& depth, int count,
                                                    std::uint64_t seed, int view);

// Cross-view depth reprojection residuals: every sampled source pixel is
// lifted with its corrected depth and projected into every other view; a
// usable target yields residual = m * (projected depth - corrected
// interpolated target depth). Throws insufficient-overlap when fewer than
// 6 residuals are usable.
std::vector<ResidualSample> cross_view_residuals(
    const RigCalibration& rig, const std::vector<DepthAffine>& corrections,
    const MultiViewFrame& frame,
    const std::vector<std::vector<std::pair<int, int>>>& samples);

struct ScaleEstimate {
  double m = 1.0;
  bool observable = false;
};

// Median ratio anchor/unscaled over jointly valid pixels of paired maps.
// Empty anchor set: m = 1, unobservable. Fewer than 100 jointly valid
// pixels: insufficient-anchor error.
ScaleEstimate recover_scale(const std::vector<DepthMap>& unscaled,
                            const std::vector<DepthMap>& anchor);

// Robust nonlinear least-squares refinement of the rig against first-frame
// cross-view depth consistency, with priors on hinted quantities. View 0 is
// gauge-fixed to its pose hint (identity when absent) and its depth gain is
// pinned to 1. The fitted per-view affine correction is applied to every
// frame of depth_sequence (indexed [t][view]) to produce per_frame_depth.
RectifiedGeometry rectify(const MultiViewFrame& first_frame, const HintSet& hints,
                          const std::vector<std::vector<DepthMap>>& depth_sequence,
                          const RectifierConfig& cfg);

// d -> a*d + b on valid pixels; invalid pixels pass through unchanged.
DepthMap apply_depth_affine(const DepthMap& depth, const DepthAffine& affine);

// Identity geometry wrapper for a known-good rig (no depth correction).
RectifiedGeometry exact_geometry(const RigCalibration& rig);

}  // namespace roomtrack
