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

#include "roomtrack/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "roomtrack/error.hpp"
#include "roomtrack/parallel.hpp"
#include "roomtrack/rng.hpp"

namespace roomtrack {

CameraPose Primitive::pose_at(int t) const {
  switch (motion) {
    case MotionKind::none:
      return pose;
    case MotionKind::linear: {
      CameraPose p = pose;
      p.t = pose.t + static_cast<double>(t) * velocity;
      return p;
    }
    case MotionKind::circular: {
      const Vec3 axis = axis_dir.normalized();
      const Mat3 turn = so3_exp(axis * (angular_speed * static_cast<double>(t)));
      CameraPose p;
      p.r = turn * pose.r;
      p.t = axis_point + turn * (pose.t - axis_point);
      return p;
    }
  }
  return pose;
}

namespace {

constexpr double kRayEpsilon = 1e-6;

// Ray o + s*d intersections, all in the primitive's local frame; `d` is
// deliberately unnormalized so the returned parameter carries the caller's
// depth unit (camera z for rendering, fraction-of-segment for visibility).

double intersect_plane(const Vec3& o, const Vec3& d, const Vec3& half) {
  if (std::abs(d.z()) < 1e-14) return -1.0;
  const double s = -o.z() / d.z();
  if (s <= kRayEpsilon) return -1.0;
  const double hx = o.x() + s * d.x();
  const double hy = o.y() + s * d.y();
  if (std::abs(hx) > half.x() || std::abs(hy) > half.y()) return -1.0;
  return s;
}

double intersect_sphere(const Vec3& o, const Vec3& d, double radius) {
  const double a = d.squaredNorm();
  const double b = 2.0 * o.dot(d);
  const double c = o.squaredNorm() - radius * radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return -1.0;
  const double root = std::sqrt(disc);
  const double s0 = (-b - root) / (2.0 * a);
  if (s0 > kRayEpsilon) return s0;
  const double s1 = (-b + root) / (2.0 * a);
  if (s1 > kRayEpsilon) return s1;
  return -1.0;
}

// Entry/exit parameters of an axis-aligned box; empty interval means miss.
bool box_interval(const Vec3& o, const Vec3& d, const Vec3& half, double& near,
                  double& far) {
  near = -std::numeric_limits<double>::infinity();
  far = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-14) {
      if (std::abs(o[i]) > half[i]) return false;
      continue;
    }
    double t0 = (-half[i] - o[i]) / d[i];
    double t1 = (half[i] - o[i]) / d[i];
    if (t0 > t1) std::swap(t0, t1);
    near = std::max(near, t0);
    far = std::min(far, t1);
    if (near > far) return false;
  }
  return true;
}

double intersect_box(const Vec3& o, const Vec3& d, const Vec3& half) {
  double near, far;
  if (!box_interval(o, d, half, near, far)) return -1.0;
  if (near > kRayEpsilon) return near;
  if (far > kRayEpsilon) return far;
  return -1.0;
}

struct Hit {
  double s = -1.0;
  int prim = -1;      // -1 is the room shell
  Vec3 local = Vec3::Zero();

  bool valid() const { return s > 0.0; }
};

std::vector<CameraPose> frame_poses(const SceneSpec& scene, int t) {
  std::vector<CameraPose> poses;
  poses.reserve(scene.primitives.size());
  for (const Primitive& prim : scene.primitives) poses.push_back(prim.pose_at(t));
  return poses;
}

// Nearest surface along o + s*d against primitives frozen at one frame's
// poses. The room box only counts when the origin is inside it (its walls
// are seen from within).
Hit cast_ray(const SceneSpec& scene, const std::vector<CameraPose>& poses, const Vec3& o,
             const Vec3& d) {
  Hit best;
  double near, far;
  if (box_interval(o, d, scene.room_half, near, far) && near <= kRayEpsilon &&
      far > kRayEpsilon) {
    best.s = far;
    best.prim = -1;
    best.local = o + far * d;
  }

  for (int i = 0; i < static_cast<int>(scene.primitives.size()); ++i) {
    const Primitive& prim = scene.primitives[i];
    const CameraPose& pose = poses[i];
    const Vec3 ol = pose.r.transpose() * (o - pose.t);
    const Vec3 dl = pose.r.transpose() * d;

    double s = -1.0;
    switch (prim.kind) {
      case PrimitiveKind::plane:
        s = intersect_plane(ol, dl, prim.size);
        break;
      case PrimitiveKind::sphere:
        s = intersect_sphere(ol, dl, prim.size.x());
        break;
      case PrimitiveKind::box:
        s = intersect_box(ol, dl, prim.size);
        break;
    }
    if (s > 0.0 && (!best.valid() || s < best.s)) {
      best.s = s;
      best.prim = i;
      best.local = ol + s * dl;
    }
  }
  return best;
}

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }

double lattice_value(std::uint64_t salt, std::int64_t ix, std::int64_t iy,
                     std::int64_t iz) {
  std::uint64_t h = salt;
  h = mix64(h ^ static_cast<std::uint64_t>(ix));
  h = mix64(h ^ static_cast<std::uint64_t>(iy));
  h = mix64(h ^ static_cast<std::uint64_t>(iz));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Trilinearly smoothed value noise in [0, 1).
double value_noise(std::uint64_t salt, const Vec3& p, double scale) {
  const double qx = p.x() / scale;
  const double qy = p.y() / scale;
  const double qz = p.z() / scale;
  const double fx = std::floor(qx);
  const double fy = std::floor(qy);
  const double fz = std::floor(qz);
  const std::int64_t ix = static_cast<std::int64_t>(fx);
  const std::int64_t iy = static_cast<std::int64_t>(fy);
  const std::int64_t iz = static_cast<std::int64_t>(fz);
  const double ux = smoothstep(qx - fx);
  const double uy = smoothstep(qy - fy);
  const double uz = smoothstep(qz - fz);

  double corners[2][2][2];
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        corners[a][b][c] = lattice_value(salt, ix + a, iy + b, iz + c);
      }
    }
  }
  const double x00 = corners[0][0][0] * (1.0 - ux) + corners[1][0][0] * ux;
  const double x10 = corners[0][1][0] * (1.0 - ux) + corners[1][1][0] * ux;
  const double x01 = corners[0][0][1] * (1.0 - ux) + corners[1][0][1] * ux;
  const double x11 = corners[0][1][1] * (1.0 - ux) + corners[1][1][1] * ux;
  const double y0 = x00 * (1.0 - uy) + x10 * uy;
  const double y1 = x01 * (1.0 - uy) + x11 * uy;
  return y0 * (1.0 - uz) + y1 * uz;
}

struct Palette {
  Vec3 color_a = Vec3(0.5, 0.5, 0.5);
  Vec3 color_b = Vec3(0.5, 0.5, 0.5);
  double cell = 0.05;       // checker period, meters
  std::uint64_t salt = 0;   // noise lattice key
};

Palette make_palette(std::uint64_t texture_seed, int texture) {
  const CounterRng rng(texture_seed, 0x74657874ULL ^ static_cast<std::uint64_t>(texture));
  Palette p;
  for (int c = 0; c < 3; ++c) {
    p.color_a[c] = 0.25 + 0.70 * rng.uniform(static_cast<std::uint64_t>(c));
    p.color_b[c] = 0.25 + 0.70 * rng.uniform(static_cast<std::uint64_t>(3 + c));
    // Guarantee per-channel checker contrast.
    if (std::abs(p.color_a[c] - p.color_b[c]) < 0.15) {
      p.color_b[c] = p.color_a[c] > 0.5 ? p.color_a[c] - 0.35 : p.color_a[c] + 0.35;
    }
    p.color_b[c] = std::clamp(p.color_b[c], 0.05, 0.98);
  }
  p.cell = 0.03 + 0.05 * rng.uniform(6);
  p.salt = rng.bits(7);
  return p;
}

Vec3 palette_color(const Palette& p, int texture, const Vec3& local) {
  if (texture == 0) return Vec3(0.5, 0.5, 0.5);
  const std::int64_t parity = static_cast<std::int64_t>(std::floor(local.x() / p.cell)) +
                              static_cast<std::int64_t>(std::floor(local.y() / p.cell)) +
                              static_cast<std::int64_t>(std::floor(local.z() / p.cell));
  const Vec3 base = (parity % 2 == 0) ? p.color_a : p.color_b;
  const double n1 = value_noise(p.salt, local, 0.02);
  const double n2 = value_noise(mix64(p.salt), local, 0.007);
  return base * (0.70 + 0.20 * n1 + 0.10 * n2);
}

Vec3 texture_color(std::uint64_t texture_seed, int texture, const Vec3& local) {
  return palette_color(make_palette(texture_seed, texture), texture, local);
}

std::uint8_t to_byte(double c) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(255.0 * c), 0L, 255L));
}

void validate_scene(const SceneSpec& scene) {
  if (scene.frames < 1) throw Error(Errc::invalid_argument, "scene: frames must be >= 1");
  if (scene.cameras.size() < 2) {
    throw Error(Errc::invalid_argument, "scene: need at least two cameras");
  }
  if (!(scene.room_half.minCoeff() > 0.0)) {
    throw Error(Errc::invalid_argument, "scene: room half-extents must be positive");
  }
  for (const CameraSpec& cam : scene.cameras) {
    cam.k.validate();
    cam.p.validate();
    if (cam.width < 1 || cam.height < 1) {
      throw Error(Errc::invalid_argument, "scene: camera resolution must be positive");
    }
  }
  for (const AnchorSpec& a : scene.anchors) {
    if (a.primitive < 0 || a.primitive >= static_cast<int>(scene.primitives.size())) {
      throw Error(Errc::invalid_argument, "scene: anchor references unknown primitive");
    }
  }
  for (int t = 0; t < scene.frames; ++t) {
    for (const CameraSpec& cam : scene.cameras) {
      for (const Primitive& prim : scene.primitives) {
        const CameraPose pose = prim.pose_at(t);
        const Vec3 local = pose.r.transpose() * (cam.p.t - pose.t);
        bool inside = false;
        switch (prim.kind) {
          case PrimitiveKind::plane:
            break;
          case PrimitiveKind::sphere:
            inside = local.norm() <= prim.size.x();
            break;
          case PrimitiveKind::box:
            inside = std::abs(local.x()) <= prim.size.x() &&
                     std::abs(local.y()) <= prim.size.y() &&
                     std::abs(local.z()) <= prim.size.z();
            break;
        }
        if (inside) {
          throw Error(Errc::invalid_argument, "scene: camera inside a primitive");
        }
      }
    }
  }
}

}  // namespace

ViewImages render_view(const SceneSpec& scene, int v, int t) {
  if (v < 0 || v >= static_cast<int>(scene.cameras.size()) || t < 0 ||
      t >= scene.frames) {
    throw Error(Errc::invalid_argument, "render_view: view or frame out of range");
  }
  const CameraSpec& cam = scene.cameras[v];
  ViewImages out;
  out.rgb = RgbImage(cam.width, cam.height);
  out.depth = DepthMap(cam.width, cam.height, 0.0);

  const std::vector<CameraPose> poses = frame_poses(scene, t);
  std::unordered_map<int, Palette> palettes;
  palettes.emplace(scene.room_texture, make_palette(scene.texture_seed, scene.room_texture));
  for (const Primitive& prim : scene.primitives) {
    if (!palettes.count(prim.texture)) {
      palettes.emplace(prim.texture, make_palette(scene.texture_seed, prim.texture));
    }
  }

  parallel_ranges(static_cast<std::size_t>(cam.height), 8,
                  [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const int row = static_cast<int>(r);
      for (int col = 0; col < cam.width; ++col) {
        // Unit camera z in the direction keeps the ray parameter equal to
        // the camera-frame depth of the hit.
        const Vec3 dir_cam((col + 0.5 - cam.k.cx) / cam.k.fx,
                           (row + 0.5 - cam.k.cy) / cam.k.fy, 1.0);
        const Hit hit = cast_ray(scene, poses, cam.p.t, cam.p.r * dir_cam);
        if (!hit.valid()) {
          out.rgb.at(row, col, 0) = 30;
          out.rgb.at(row, col, 1) = 30;
          out.rgb.at(row, col, 2) = 30;
          continue;
        }
        out.depth.at(row, col) = hit.s;
        const int texture =
            hit.prim < 0 ? scene.room_texture : scene.primitives[hit.prim].texture;
        const Vec3 c = palette_color(palettes.at(texture), texture, hit.local);
        out.rgb.at(row, col, 0) = to_byte(c.x());
        out.rgb.at(row, col, 1) = to_byte(c.y());
        out.rgb.at(row, col, 2) = to_byte(c.z());
      }
    }
  });
  return out;
}

bool point_visible(const SceneSpec& scene, const Vec3& world, int v, int t) {
  const CameraSpec& cam = scene.cameras[v];
  const Projection proj = project(cam.k, cam.p, world);
  if (proj.behind) return false;
  if (proj.pixel.x() < 0.0 || proj.pixel.x() >= cam.width || proj.pixel.y() < 0.0 ||
      proj.pixel.y() >= cam.height) {
    return false;
  }

  const Vec3 d = world - cam.p.t;
  const double dist = d.norm();
  if (dist <= 1e-9) return true;
  const Hit hit = cast_ray(scene, frame_poses(scene, t), cam.p.t, d);
  // 5 mm of slack along the ray keeps the surface the point sits on from
  // occluding it.
  return !(hit.valid() && hit.s < 1.0 - 0.005 / dist);
}

Sequence generate_scene(const SceneSpec& spec) {
  validate_scene(spec);
  const int V = static_cast<int>(spec.cameras.size());

  Sequence seq;
  seq.rig.scale = 1.0;
  seq.rig.views.resize(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) {
    seq.rig.views[v].k = spec.cameras[v].k;
    seq.rig.views[v].p = spec.cameras[v].p;
  }

  seq.frames.resize(static_cast<std::size_t>(spec.frames));
  for (int t = 0; t < spec.frames; ++t) {
    seq.frames[t].t = t;
    seq.frames[t].views.resize(static_cast<std::size_t>(V));
    for (int v = 0; v < V; ++v) {
      seq.frames[t].views[v] = render_view(spec, v, t);
    }
  }

  for (int a = 0; a < static_cast<int>(spec.anchors.size()); ++a) {
    const AnchorSpec& anchor = spec.anchors[a];
    const Primitive& prim = spec.primitives[anchor.primitive];
    GtTrack gt;
    gt.id = a;
    gt.positions.reserve(static_cast<std::size_t>(spec.frames));
    gt.visible.reserve(static_cast<std::size_t>(spec.frames));
    int first_visible = -1;
    for (int t = 0; t < spec.frames; ++t) {
      const Vec3 world = prim.pose_at(t).apply(anchor.local);
      bool vis = false;
      for (int v = 0; v < V && !vis; ++v) {
        vis = point_visible(spec, world, v, t);
      }
      gt.positions.push_back(world);
      gt.visible.push_back(vis ? 1 : 0);
      if (vis && first_visible < 0) first_visible = t;
    }
    if (first_visible < 0) {
      throw Error(Errc::invalid_argument, "generate_scene: anchor never visible");
    }
    seq.queries.push_back({a, first_visible, gt.positions[first_visible]});
    seq.gt.push_back(std::move(gt));
  }
  return seq;
}

PerturbedRig perturb_calibration(const RigCalibration& rig, const PerturbationSpec& p) {
  PerturbedRig out;
  out.rig = rig;
  out.depth_affine.assign(rig.views.size(), DepthAffine{});

  const double sigma_rad = p.sigma_rot_deg * std::numbers::pi / 180.0;
  for (std::size_t v = 0; v < rig.views.size(); ++v) {
    const CounterRng rng(p.seed, static_cast<std::uint64_t>(v));
    Vec3 axis(rng.gaussian(0), rng.gaussian(1), rng.gaussian(2));
    if (axis.norm() < 1e-12) axis = Vec3::UnitZ();
    axis.normalize();
    const double angle = std::abs(rng.gaussian(3)) * sigma_rad;

    ViewCalibration& view = out.rig.views[v];
    view.p.r = view.p.r * so3_exp(axis * angle);
    view.p.t += p.sigma_trans * Vec3(rng.gaussian(4), rng.gaussian(5), rng.gaussian(6));
    view.k.fx *= 1.0 + p.sigma_focal_rel * rng.gaussian(7);
    view.k.fy *= 1.0 + p.sigma_focal_rel * rng.gaussian(8);
    view.k.cx += p.sigma_center_px * rng.gaussian(9);
    view.k.cy += p.sigma_center_px * rng.gaussian(10);
    out.depth_affine[v].a = 1.0 + p.sigma_depth_a * rng.gaussian(11);
    out.depth_affine[v].b = p.sigma_depth_b * rng.gaussian(12);
  }
  return out;
}

DepthMap corrupt_depth(const DepthMap& depth, const DepthAffine& affine) {
  return apply_depth_affine(depth, affine);
}

namespace {

CameraSpec jittered_camera(std::uint64_t seed, int v, double azimuth, double radius,
                           double height, const Vec3& target, int width, int height_px) {
  const CounterRng rng(seed, 0x63616d00ULL ^ static_cast<std::uint64_t>(v));
  CameraSpec cam;
  cam.width = width;
  cam.height = height_px;
  const double a = azimuth + rng.uniform(0, -0.06, 0.06);
  const double r = radius * rng.uniform(1, 0.95, 1.08);
  const Vec3 pos(r * std::cos(a), r * std::sin(a), height + rng.uniform(2, -0.08, 0.08));
  cam.p = look_at(pos, target + Vec3(rng.uniform(3, -0.05, 0.05),
                                     rng.uniform(4, -0.05, 0.05), 0.0));
  const double f = width * rng.uniform(5, 0.60, 0.68);
  cam.k.fx = f;
  cam.k.fy = f * rng.uniform(6, 0.99, 1.01);
  cam.k.cx = 0.5 * width + rng.uniform(7, -3.0, 3.0);
  cam.k.cy = 0.5 * height_px + rng.uniform(8, -3.0, 3.0);
  return cam;
}

Primitive flat_mat(const Vec3& center, double hx, double hy, int texture) {
  Primitive p;
  p.kind = PrimitiveKind::box;
  p.pose.t = center;
  p.size = Vec3(hx, hy, 0.02);
  p.texture = texture;
  return p;
}

Primitive small_sphere(const Vec3& center, double radius, int texture) {
  Primitive p;
  p.kind = PrimitiveKind::sphere;
  p.pose.t = center;
  p.size = Vec3(radius, radius, radius);
  p.texture = texture;
  return p;
}

// Tilted rectangle whose center line lies at floor level: the lower wing is
// buried, the upper wing rises gently, so the surface adds orientation
// diversity with almost no disocclusion rim.
Primitive ramp(const Vec3& center, double azimuth, double tilt, double hx,
               double hy, int texture) {
  Primitive p;
  p.kind = PrimitiveKind::plane;
  p.pose.r = (Eigen::AngleAxisd(azimuth, Vec3::UnitZ()) *
              Eigen::AngleAxisd(tilt, Vec3::UnitX()))
                 .toRotationMatrix();
  p.pose.t = center;
  p.size = Vec3(hx, hy, 0.0);
  p.texture = texture;
  return p;
}

}  // namespace

SceneSpec standard_scene(std::uint64_t seed) {
  SceneSpec s;
  s.room_half = Vec3(3.0, 2.5, 1.5);
  s.room_texture = 20;
  s.frames = 40;
  s.texture_seed = seed;

  // Everything rests on the floor so cross-view depth discontinuities stay
  // a few centimeters: steep viewpoints then see almost no disocclusion.
  const double floor_z = -s.room_half.z();
  const double mat_top = floor_z + 0.04;
  s.primitives.push_back(flat_mat(Vec3(0.0, 0.0, floor_z + 0.02), 0.55, 0.40, 1));
  s.primitives.push_back(flat_mat(Vec3(0.95, 0.70, floor_z + 0.02), 0.30, 0.25, 2));
  s.primitives.push_back(flat_mat(Vec3(-0.85, -0.65, floor_z + 0.02), 0.28, 0.22, 3));

  // Static instruments, pressed 2 mm into their mats. Kept small so the
  // disocclusion shadow they cast across view pairs stays a minor share of
  // the consistency tally.
  s.primitives.push_back(small_sphere(Vec3(0.25, -0.12, mat_top + 0.063), 0.065, 4));
  s.primitives.push_back(small_sphere(Vec3(-0.28, 0.16, mat_top + 0.053), 0.055, 5));
  s.primitives.push_back(small_sphere(Vec3(1.0, 0.62, mat_top + 0.063), 0.065, 6));

  // Moving instruments: one straight pass over the main mat, one slow
  // carousel skimming it.
  Primitive roller = small_sphere(Vec3(-0.35, -0.30, mat_top + 0.068), 0.07, 7);
  roller.motion = MotionKind::linear;
  roller.velocity = Vec3(0.018, 0.012, 0.0);
  s.primitives.push_back(roller);

  Primitive carousel;
  carousel.kind = PrimitiveKind::box;
  carousel.pose.t = Vec3(0.55, 0.35, mat_top + 0.063);
  carousel.size = Vec3(0.05, 0.05, 0.06);
  carousel.texture = 8;
  carousel.motion = MotionKind::circular;
  carousel.axis_point = Vec3(0.35, 0.20, 0.0);
  carousel.axis_dir = Vec3::UnitZ();
  carousel.angular_speed = 0.035;
  s.primitives.push_back(carousel);

  // Half-buried ramps at mixed azimuths: smooth oblique surfaces that pin
  // the rig's lateral and axial degrees of freedom.
  s.primitives.push_back(ramp(Vec3(1.55, -0.45, floor_z), 0.4, 0.35, 0.45, 0.32, 9));
  s.primitives.push_back(ramp(Vec3(-0.35, 1.25, floor_z), 2.1, 0.30, 0.45, 0.32, 10));
  s.primitives.push_back(ramp(Vec3(-1.65, 0.35, floor_z), 3.6, 0.40, 0.45, 0.32, 11));
  s.primitives.push_back(ramp(Vec3(0.45, -1.35, floor_z), 5.2, 0.33, 0.45, 0.32, 12));

  const Vec3 target(0.0, 0.0, -1.1);
  for (int v = 0; v < 5; ++v) {
    const double azimuth = 2.0 * std::numbers::pi * v / 5.0 + 0.3;
    s.cameras.push_back(jittered_camera(seed, v, azimuth, 1.45, 1.25, target, 640, 480));
  }

  // Anchors: mat surfaces, instrument crowns, and both movers.
  s.anchors.push_back({0, Vec3(0.22, 0.10, 0.02)});
  s.anchors.push_back({0, Vec3(-0.30, -0.14, 0.02)});
  s.anchors.push_back({0, Vec3(0.05, 0.28, 0.02)});
  s.anchors.push_back({1, Vec3(0.10, -0.06, 0.02)});
  s.anchors.push_back({2, Vec3(-0.08, 0.05, 0.02)});
  s.anchors.push_back({3, Vec3(0.0, 0.0, 0.065)});
  s.anchors.push_back({4, Vec3(0.0, 0.0, 0.055)});
  s.anchors.push_back({5, Vec3(0.0, 0.0, 0.065)});
  s.anchors.push_back({6, Vec3(0.0, 0.0, 0.07)});
  s.anchors.push_back({7, Vec3(0.0, 0.0, 0.06)});
  return s;
}

SceneSpec occlusion_cross_scene(std::uint64_t seed) {
  SceneSpec s;
  s.room_half = Vec3(3.0, 2.5, 1.5);
  s.room_texture = 20;
  s.frames = 30;
  s.texture_seed = seed;

  s.primitives.push_back(flat_mat(Vec3(0.0, 0.0, -0.50), 0.55, 0.40, 1));

  // Slowly drifting target on the mat.
  Primitive target_sphere = small_sphere(Vec3(0.0, -0.12, -0.365), 0.11, 4);
  target_sphere.motion = MotionKind::linear;
  target_sphere.velocity = Vec3(0.0, 0.006, 0.0);
  s.primitives.push_back(target_sphere);

  const Vec3 target(0.0, 0.0, -0.45);
  for (int v = 0; v < 5; ++v) {
    const double azimuth = 2.0 * std::numbers::pi * v / 5.0 + 0.3;
    s.cameras.push_back(jittered_camera(seed, v, azimuth, 1.85, 0.95, target, 320, 240));
  }

  // Tall screen between the target and cameras 3 and 4 (which sit in the
  // third quadrant for the azimuth offset above); the other three keep a
  // clear line of sight for the whole drift.
  Vec3 blocked_dir = Vec3::Zero();
  blocked_dir += (s.cameras[3].p.t - Vec3(0.0, 0.0, -0.4)).normalized();
  blocked_dir += (s.cameras[4].p.t - Vec3(0.0, 0.0, -0.4)).normalized();
  blocked_dir.z() = 0.0;
  blocked_dir.normalize();
  Primitive screen;
  screen.kind = PrimitiveKind::box;
  screen.pose.r = look_at(Vec3::Zero(), blocked_dir).r;  // local z toward cameras
  screen.pose.t = Vec3(0.0, -0.10, -0.25) + 0.55 * blocked_dir;
  screen.size = Vec3(0.75, 0.75, 0.03);
  screen.texture = 9;
  s.primitives.push_back(screen);

  s.anchors.push_back({1, Vec3(0.0, 0.0, 0.11)});
  s.anchors.push_back({0, Vec3(0.30, 0.20, 0.02)});
  return s;
}

SceneSpec occlusion_full_scene(std::uint64_t seed) {
  SceneSpec s;
  s.room_half = Vec3(3.0, 2.5, 1.5);
  s.room_texture = 20;
  s.frames = 36;
  s.texture_seed = seed;

  s.primitives.push_back(flat_mat(Vec3(-0.8, 0.0, -0.55), 0.45, 0.45, 1));

  // Slow target, watched by a one-sided camera arc.
  Primitive target_sphere = small_sphere(Vec3(-0.8, -0.20, -0.42), 0.11, 4);
  target_sphere.motion = MotionKind::linear;
  target_sphere.velocity = Vec3(0.0, 0.015, 0.0);
  s.primitives.push_back(target_sphere);

  // Fast screen sweeping through every line of sight around mid-sequence.
  Primitive screen;
  screen.kind = PrimitiveKind::box;
  screen.pose.t = Vec3(0.4, -4.7, -0.45);
  screen.size = Vec3(0.03, 0.90, 0.80);
  screen.texture = 9;
  screen.motion = MotionKind::linear;
  screen.velocity = Vec3(0.0, 0.25, 0.0);
  s.primitives.push_back(screen);

  const Vec3 look(-0.8, 0.0, -0.45);
  for (int v = 0; v < 5; ++v) {
    // Arc on the +x side spanning y in [-0.5, 0.5].
    const double y = -0.5 + 0.25 * v;
    const CounterRng rng(seed, 0x63616d00ULL ^ static_cast<std::uint64_t>(v));
    const Vec3 pos(1.8 + rng.uniform(0, -0.05, 0.05), y, 0.9 + rng.uniform(1, -0.05, 0.05));
    CameraSpec cam;
    cam.width = 320;
    cam.height = 240;
    cam.p = look_at(pos, look);
    const double f = cam.width * rng.uniform(2, 0.60, 0.66);
    cam.k.fx = f;
    cam.k.fy = f;
    cam.k.cx = 0.5 * cam.width + rng.uniform(3, -2.0, 2.0);
    cam.k.cy = 0.5 * cam.height + rng.uniform(4, -2.0, 2.0);
    s.cameras.push_back(cam);
  }

  s.anchors.push_back({1, Vec3(0.0, 0.0, 0.11)});
  s.anchors.push_back({0, Vec3(-0.25, 0.25, 0.02)});
  return s;
}

}  // namespace roomtrack
