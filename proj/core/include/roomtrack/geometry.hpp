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
#include <cstdint>
#include <vector>

#include "roomtrack/image.hpp"

namespace roomtrack {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// z at or below this is treated as behind the camera when projecting.
inline constexpr double kBehindEpsilon = 1e-6;

// Pixel k has its center at continuous coordinate k + 0.5.
inline Vec2 pixel_center(int row, int col) {
  return Vec2(col + 0.5, row + 0.5);
}

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  // Throws invariant-violation unless fx, fy > 0 and all fields finite.
  void validate() const;
};

// Camera-to-room transform: X_room = r * x_cam + t.
struct CameraPose {
  Mat3 r = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  // Throws invariant-violation unless r is orthonormal with det +1
  // within 1e-9 and t is finite.
  void validate() const;

  CameraPose inverse() const;
  // Composition: (this * other) maps x -> this(other(x)).
  CameraPose operator*(const CameraPose& other) const;
  Vec3 apply(const Vec3& x) const { return r * x + t; }
};

struct ViewCalibration {
  CameraIntrinsics k;
  CameraPose p;
};

struct RigCalibration {
  std::vector<ViewCalibration> views;
  double scale = 1.0;  // global metric multiplier m

  int view_count() const { return static_cast<int>(views.size()); }
  // Throws invariant-violation unless V >= 2, scale > 0, and every
  // view's intrinsics and pose validate.
  void validate() const;
};

// Rodrigues exponential: axis-angle vector to rotation matrix.
Mat3 so3_exp(const Vec3& w);
// Inverse of so3_exp; returns the minimal axis-angle vector.
Vec3 so3_log(const Mat3& r);

// Pixel + depth to a camera-frame point. Throws invalid-depth when d is
// non-finite or <= 0.
Vec3 backproject(const CameraIntrinsics& k, const Vec2& u, double d);

// Camera frame to room frame.
inline Vec3 to_room(const CameraPose& p, const Vec3& x) { return p.apply(x); }

// Apply the global metric scale.
inline Vec3 metric_lift(double m, const Vec3& x) { return m * x; }

// Camera-to-room pose at `position` with the optical axis toward `target`
// and image rows descending along `up`. Throws invalid-argument when the
// viewing direction is degenerate or parallel to `up`.
CameraPose look_at(const Vec3& position, const Vec3& target,
                   const Vec3& up = Vec3(0.0, 0.0, 1.0));

struct Projection {
  Vec2 pixel = Vec2::Zero();
  double depth = 0.0;
  bool behind = false;
};

// Room-frame point to pixel + camera depth. behind is set (and pixel/depth
// left zero) when the point lies at or behind the camera plane.
Projection project(const CameraIntrinsics& k, const CameraPose& p, const Vec3& x_room);

struct PointRecord {
  Vec3 position = Vec3::Zero();  // metric room frame
  std::uint16_t view = 0;
  std::uint16_t row = 0;
  std::uint16_t col = 0;
};

struct FramePointMap {
  std::vector<std::vector<PointRecord>> per_view;
  std::vector<PointRecord> all;  // concatenation, (view, row, col) ascending

  bool empty() const { return all.empty(); }
};

// Lifts every valid-depth pixel of every view to the metric room frame.
// Output order is deterministic regardless of thread count.
FramePointMap frame_point_map(const MultiViewFrame& f, const RigCalibration& c);

}  // namespace roomtrack
