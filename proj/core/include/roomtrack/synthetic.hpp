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

#include "roomtrack/geometry.hpp"
#include "roomtrack/image.hpp"
#include "roomtrack/rectify.hpp"
#include "roomtrack/track.hpp"

namespace roomtrack {

enum class PrimitiveKind { plane, sphere, box };
enum class MotionKind { none, linear, circular };

// Analytic scene element. Sizes are half-extents in the local frame
// (plane: x/y half-extents of a z=0 rectangle; sphere: radius in x;
// box: x/y/z half-extents). texture 0 renders as untextured flat gray.
struct Primitive {
  PrimitiveKind kind = PrimitiveKind::box;
  CameraPose pose;  // local-to-room at t = 0
  Vec3 size = Vec3(0.1, 0.1, 0.1);
  int texture = 1;

  MotionKind motion = MotionKind::none;
  Vec3 velocity = Vec3::Zero();  // linear motion, m/frame
  Vec3 axis_point = Vec3::Zero();  // circular motion axis
  Vec3 axis_dir = Vec3::UnitZ();
  double angular_speed = 0.0;  // rad/frame

  CameraPose pose_at(int t) const;
};

// Surface point tracked through a primitive's motion, given in the
// primitive's local frame.
struct AnchorSpec {
  int primitive = 0;
  Vec3 local = Vec3::Zero();
};

struct CameraSpec {
  CameraIntrinsics k;
  CameraPose p;
  int width = 640;
  int height = 480;
};

// Closed room box centered at the origin, rendered from inside, plus
// analytic primitives. Everything about the sequence is a pure function
// of this spec.
struct SceneSpec {
  Vec3 room_half = Vec3(3.0, 2.5, 1.5);
  int room_texture = 1;
  std::vector<Primitive> primitives;
  std::vector<CameraSpec> cameras;
  int frames = 1;
  std::vector<AnchorSpec> anchors;
  std::uint64_t texture_seed = 0;
};

struct PerturbationSpec {
  double sigma_rot_deg = 0.0;
  double sigma_trans = 0.0;      // meters
  double sigma_focal_rel = 0.0;  // relative focal noise
  double sigma_center_px = 0.0;  // principal point, pixels
  double sigma_depth_a = 0.0;    // depth gain noise (relative)
  double sigma_depth_b = 0.0;    // depth offset noise, meters
  std::uint64_t seed = 0;
};

struct GtTrack {
  int id = 0;
  std::vector<Vec3> positions;        // one per frame from t = 0
  std::vector<std::uint8_t> visible;  // visible in at least one view
};

struct Sequence {
  std::vector<MultiViewFrame> frames;
  RigCalibration rig;  // scale 1
  std::vector<Query> queries;
  std::vector<GtTrack> gt;
};

// Exact ray-cast rendering of one view at one frame. Depth is the analytic
// camera-frame z of the nearest hit; pixels seeing nothing get invalid depth
// (cameras inside the room box always hit it).
ViewImages render_view(const SceneSpec& scene, int v, int t);

// Whether nothing blocks the straight line from camera v to a room-frame
// point at frame t (5 mm depth-test slack), with the point inside the view
// frustum and image bounds.
bool point_visible(const SceneSpec& scene, const Vec3& world, int v, int t);

// Renders all frames, derives ground-truth anchor trajectories and
// visibility, and emits one query per anchor at its first visible frame.
// Throws invalid-argument when an anchor is never visible.
Sequence generate_scene(const SceneSpec& spec);

struct PerturbedRig {
  RigCalibration rig;
  std::vector<DepthAffine> depth_affine;  // sensor corruption per view
};

// Deterministic noisy copy of a rig: rotations by random axis-angle with
// half-normal magnitude, everything else Gaussian. The returned depth
// affine models per-view sensor drift and is meant to corrupt observed
// depth maps.
PerturbedRig perturb_calibration(const RigCalibration& rig, const PerturbationSpec& p);

// Applies d -> a*d + b to every valid pixel.
DepthMap corrupt_depth(const DepthMap& depth, const DepthAffine& affine);

// Scene presets. The seed jitters layout, intrinsics, and textures.
SceneSpec standard_scene(std::uint64_t seed);
// Target permanently hidden from two of five views.
SceneSpec occlusion_cross_scene(std::uint64_t seed);
// Moving target hidden from every view for a few middle frames.
SceneSpec occlusion_full_scene(std::uint64_t seed);

}  // namespace roomtrack
