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

#include "roomtrack/geometry.hpp"

#include <cmath>

#include "roomtrack/error.hpp"
#include "roomtrack/parallel.hpp"

namespace roomtrack {

void CameraIntrinsics::validate() const {
  if (!(std::isfinite(fx) && std::isfinite(fy) && std::isfinite(cx) && std::isfinite(cy))) {
    throw Error(Errc::invariant_violation, "intrinsics must be finite");
  }
  if (!(fx > 0.0 && fy > 0.0)) {
    throw Error(Errc::invariant_violation, "focal lengths must be positive");
  }
}

void CameraPose::validate() const {
  if (!r.allFinite() || !t.allFinite()) {
    throw Error(Errc::invariant_violation, "pose must be finite");
  }
  const Mat3 err = r.transpose() * r - Mat3::Identity();
  if (err.cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(Errc::invariant_violation, "rotation is not orthonormal within 1e-9");
  }
  if (std::abs(r.determinant() - 1.0) > 1e-9) {
    throw Error(Errc::invariant_violation, "rotation determinant is not +1 within 1e-9");
  }
}

CameraPose CameraPose::inverse() const {
  CameraPose inv;
  inv.r = r.transpose();
  inv.t = -(r.transpose() * t);
  return inv;
}

CameraPose CameraPose::operator*(const CameraPose& other) const {
  CameraPose out;
  out.r = r * other.r;
  out.t = r * other.t + t;
  return out;
}

void RigCalibration::validate() const {
  if (views.size() < 2) {
    throw Error(Errc::invariant_violation, "rig needs at least two views");
  }
  if (!(std::isfinite(scale) && scale > 0.0)) {
    throw Error(Errc::invariant_violation, "metric scale must be positive and finite");
  }
  for (const auto& v : views) {
    v.k.validate();
    v.p.validate();
  }
}

Mat3 so3_exp(const Vec3& w) {
  const double theta = w.norm();
  Mat3 hat;
  hat << 0.0, -w.z(), w.y(),
         w.z(), 0.0, -w.x(),
        -w.y(), w.x(), 0.0;
  if (theta < 1e-12) {
    return Mat3::Identity() + hat;
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3::Identity() + a * hat + b * (hat * hat);
}

Vec3 so3_log(const Mat3& r) {
  const double tr = r.trace();
  const double cos_theta = std::clamp((tr - 1.0) * 0.5, -1.0, 1.0);
  const double theta = std::acos(cos_theta);
  const Vec3 vee(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));

  if (theta < 1e-9) {
    return 0.5 * vee;
  }
  if (theta > M_PI - 1e-6) {
    // Near pi, extract the axis from the symmetric part.
    const Mat3 s = 0.5 * (r + Mat3::Identity());
    Vec3 axis(std::sqrt(std::max(0.0, s(0, 0))),
              std::sqrt(std::max(0.0, s(1, 1))),
              std::sqrt(std::max(0.0, s(2, 2))));
    int k = 0;
    if (axis.y() > axis.x()) k = 1;
    if (axis.z() > axis[k]) k = 2;
    if (axis[k] < 1e-12) return Vec3::Zero();
    for (int i = 0; i < 3; ++i) {
      if (i != k && s(k, i) < 0.0) axis[i] = -axis[i];
    }
    axis.normalize();
    if (vee.dot(axis) < 0.0) axis = -axis;
    return theta * axis;
  }
  return (theta / (2.0 * std::sin(theta))) * vee;
}

CameraPose look_at(const Vec3& position, const Vec3& target, const Vec3& up) {
  const Vec3 f = target - position;
  if (f.norm() < 1e-12) {
    throw Error(Errc::invalid_argument, "look_at: target coincides with position");
  }
  const Vec3 forward = f.normalized();
  const Vec3 right_raw = forward.cross(up);
  if (right_raw.norm() < 1e-9) {
    throw Error(Errc::invalid_argument, "look_at: view direction parallel to up");
  }
  const Vec3 right = right_raw.normalized();
  const Vec3 down = forward.cross(right);
  CameraPose pose;
  pose.r.col(0) = right;
  pose.r.col(1) = down;
  pose.r.col(2) = forward;
  pose.t = position;
  return pose;
}

Vec3 backproject(const CameraIntrinsics& k, const Vec2& u, double d) {
  if (!(std::isfinite(d) && d > 0.0)) {
    throw Error(Errc::invalid_depth, "depth must be finite and positive");
  }
  return Vec3((u.x() - k.cx) / k.fx * d, (u.y() - k.cy) / k.fy * d, d);
}

Projection project(const CameraIntrinsics& k, const CameraPose& p, const Vec3& x_room) {
  const Vec3 x_cam = p.r.transpose() * (x_room - p.t);
  Projection out;
  if (x_cam.z() <= kBehindEpsilon) {
    out.behind = true;
    return out;
  }
  out.pixel = Vec2(k.fx * x_cam.x() / x_cam.z() + k.cx,
                   k.fy * x_cam.y() / x_cam.z() + k.cy);
  out.depth = x_cam.z();
  return out;
}

FramePointMap frame_point_map(const MultiViewFrame& f, const RigCalibration& c) {
  if (static_cast<int>(f.views.size()) != c.view_count()) {
    throw Error(Errc::dimension_mismatch, "frame view count does not match rig");
  }
  FramePointMap out;
  out.per_view.resize(f.views.size());

  for (std::size_t v = 0; v < f.views.size(); ++v) {
    const DepthMap& depth = f.views[v].depth;
    const CameraIntrinsics& k = c.views[v].k;
    const CameraPose& p = c.views[v].p;
    const double m = c.scale;

    std::vector<std::vector<PointRecord>> rows(static_cast<std::size_t>(depth.height));
    parallel_ranges(static_cast<std::size_t>(depth.height), 16,
                    [&](std::size_t begin, std::size_t end) {
      for (std::size_t row = begin; row < end; ++row) {
        auto& bucket = rows[row];
        for (int col = 0; col < depth.width; ++col) {
          const double d = depth.at(static_cast<int>(row), col);
          if (!depth_valid(d)) continue;
          const Vec3 x = backproject(k, pixel_center(static_cast<int>(row), col), d);
          PointRecord rec;
          rec.position = metric_lift(m, to_room(p, x));
          rec.view = static_cast<std::uint16_t>(v);
          rec.row = static_cast<std::uint16_t>(row);
          rec.col = static_cast<std::uint16_t>(col);
          bucket.push_back(rec);
        }
      }
    });

    auto& view_points = out.per_view[v];
    for (auto& bucket : rows) {
      view_points.insert(view_points.end(), bucket.begin(), bucket.end());
    }
    out.all.insert(out.all.end(), view_points.begin(), view_points.end());
  }
  return out;
}

}  // namespace roomtrack
