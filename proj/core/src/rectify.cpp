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

#include "roomtrack/rectify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>

#include "roomtrack/error.hpp"
#include "roomtrack/parallel.hpp"
#include "roomtrack/rng.hpp"

namespace roomtrack {

bool HintSet::any_pose() const {
  for (const auto& v : views) {
    if (v.has_pose) return true;
  }
  return false;
}

bool HintSet::any_depth() const {
  for (const auto& v : views) {
    if (v.has_depth) return true;
  }
  return false;
}

void RectifierConfig::validate() const {
  if (max_iterations < 1 || max_rejected_steps < 1) {
    throw Error(Errc::invalid_argument, "rectifier iteration limits must be positive");
  }
  if (!(initial_damping > 0.0 && damping_up > 1.0 && damping_down > 0.0 &&
        damping_down < 1.0)) {
    throw Error(Errc::invalid_argument, "rectifier damping parameters out of range");
  }
  if (!(tolerance > 0.0 && huber_delta > 0.0)) {
    throw Error(Errc::invalid_argument, "rectifier tolerance and loss scale must be positive");
  }
  if (samples_per_view < 16) {
    throw Error(Errc::invalid_argument, "rectifier needs at least 16 samples per view");
  }
  if (!(lambda_intrinsics >= 0.0 && lambda_pose >= 0.0 && lambda_depth >= 0.0)) {
    throw Error(Errc::invalid_argument, "rectifier prior weights must be non-negative");
  }
}

std::vector<std::pair<int, int>> stratified_samples(const DepthMap& depth, int count,
                                                    std::uint64_t seed, int view) {
  if (count < 1) throw Error(Errc::invalid_argument, "stratified_samples: count must be >= 1");
  std::vector<std::pair<int, int>> out;
  const int w = depth.width;
  const int h = depth.height;
  if (w <= 0 || h <= 0) return out;

  int gx = static_cast<int>(std::ceil(
      std::sqrt(static_cast<double>(count) * w / std::max(1, h))));
  gx = std::max(1, std::min(gx, w));
  int gy = (count + gx - 1) / gx;
  gy = std::max(1, std::min(gy, h));

  out.reserve(static_cast<std::size_t>(count));
  for (int cy = 0; cy < gy && static_cast<int>(out.size()) < count; ++cy) {
    const int y0 = cy * h / gy;
    const int y1 = (cy + 1) * h / gy;
    for (int cx = 0; cx < gx && static_cast<int>(out.size()) < count; ++cx) {
      const int x0 = cx * w / gx;
      const int x1 = (cx + 1) * w / gx;
      if (y1 <= y0 || x1 <= x0) continue;

      const std::uint64_t stream =
          (static_cast<std::uint64_t>(view) << 32) ^
          static_cast<std::uint64_t>(cy * gx + cx);
      const CounterRng rng(seed, stream);

      bool found = false;
      for (int attempt = 0; attempt < 16 && !found; ++attempt) {
        const int row = y0 + static_cast<int>(rng.uniform_index(
                                 2 * attempt, static_cast<std::uint64_t>(y1 - y0)));
        const int col = x0 + static_cast<int>(rng.uniform_index(
                                 2 * attempt + 1, static_cast<std::uint64_t>(x1 - x0)));
        if (depth.valid_at(row, col)) {
          out.emplace_back(row, col);
          found = true;
        }
      }
      for (int row = y0; row < y1 && !found; ++row) {
        for (int col = x0; col < x1 && !found; ++col) {
          if (depth.valid_at(row, col)) {
            out.emplace_back(row, col);
            found = true;
          }
        }
      }
    }
  }
  return out;
}

DepthMap apply_depth_affine(const DepthMap& depth, const DepthAffine& affine) {
  DepthMap out = depth;
  for (double& d : out.data) {
    if (depth_valid(d)) d = affine.a * d + affine.b;
  }
  return out;
}

namespace {

// Non-planarity of the bilinear footprint at (ux, uy): the second
// difference of the four corners, which stays near zero on smooth surfaces
// at any slope but jumps to the step size across a depth discontinuity.
// Empty when any corner is invalid or out of bounds. Mirrors
// sample_depth_bilinear's footprint.
std::optional<double> footprint_fold(const DepthMap& d, double ux, double uy) {
  const double gx = ux - 0.5;
  const double gy = uy - 0.5;
  const int x0 = static_cast<int>(std::floor(gx));
  const int y0 = static_cast<int>(std::floor(gy));
  if (x0 < 0 || y0 < 0 || x0 + 1 >= d.width || y0 + 1 >= d.height) return std::nullopt;
  const double d00 = d.at(y0, x0);
  const double d01 = d.at(y0, x0 + 1);
  const double d10 = d.at(y0 + 1, x0);
  const double d11 = d.at(y0 + 1, x0 + 1);
  if (!depth_valid(d00) || !depth_valid(d01) || !depth_valid(d10) || !depth_valid(d11)) {
    return std::nullopt;
  }
  return std::abs(d00 + d11 - d01 - d10);
}

// Slot states: invalid slots pay the miss penalty when they are members of
// the active fit (so pushing samples out of view never helps); gated slots
// sit on a depth discontinuity where the blended value names no real
// surface, and contribute nothing in either direction.
enum class SlotState : std::uint8_t { invalid = 0, ok = 1, gated = 2 };

struct SlotEval {
  double r = 0.0;
  // Fades from 1 in the target-frustum interior to 0 at the edge of the
  // bilinear-usable region, so losing a sample off the image border is a
  // smooth barrier rather than a cliff the optimizer pins against.
  double border = 1.0;
  SlotState state = SlotState::invalid;
};

// Unscaled cross-view residual for one (source pixel, target view) pair.
// Invalid when the corrected source depth is non-positive, the projection
// is behind the target camera or outside its usable bilinear footprint, or
// the corrected target depth is non-positive. With max_spread > 0 a
// footprint straddling a depth discontinuity is gated instead.
SlotEval slot_residual(const CameraIntrinsics& kv, const CameraPose& pv,
                       const DepthAffine& av, const CameraIntrinsics& kw,
                       const CameraPose& pw, const DepthAffine& aw,
                       const DepthMap& dw, int row, int col, double d_raw,
                       double max_spread = 0.0) {
  const double ds = av.a * d_raw + av.b;
  if (!(std::isfinite(ds) && ds > 0.0)) return {};
  const Vec3 x = backproject(kv, pixel_center(row, col), ds);
  const Vec3 room = pv.apply(x);
  const Projection proj = project(kw, pw, room);
  if (proj.behind) return {};
  const std::optional<double> interp = sample_depth_bilinear(dw, proj.pixel.x(), proj.pixel.y());
  if (!interp) return {};
  const double dt = aw.a * *interp + aw.b;
  if (!(std::isfinite(dt) && dt > 0.0)) return {};
  if (max_spread > 0.0) {
    const std::optional<double> fold = footprint_fold(dw, proj.pixel.x(), proj.pixel.y());
    if (!fold || std::abs(aw.a) * *fold > max_spread) {
      return {proj.depth - dt, 0.0, SlotState::gated};
    }
  }
  const double margin =
      std::min(std::min(proj.pixel.x() - 0.5, dw.width - 0.5 - proj.pixel.x()),
               std::min(proj.pixel.y() - 0.5, dw.height - 0.5 - proj.pixel.y()));
  return {proj.depth - dt, std::clamp(margin * 0.5, 0.0, 1.0), SlotState::ok};
}

struct RigState {
  std::vector<CameraIntrinsics> k;
  std::vector<CameraPose> p;
  std::vector<DepthAffine> ab;
};

struct ParamLayout {
  struct View {
    int k = -1;     // fx fy cx cy
    int pose = -1;  // axis-angle increment + translation increment (views >= 1)
    int a = -1;     // depth gain (views >= 1; view 0 pinned to 1)
    int b = -1;     // depth offset
  };
  std::vector<View> views;
  int total = 0;
};

ParamLayout make_layout(int views) {
  ParamLayout layout;
  layout.views.resize(static_cast<std::size_t>(views));
  int off = 0;
  for (int v = 0; v < views; ++v) {
    layout.views[v].k = off;
    off += 4;
    if (v > 0) {
      layout.views[v].pose = off;
      off += 6;
      layout.views[v].a = off;
      off += 1;
    }
    layout.views[v].b = off;
    off += 1;
  }
  layout.total = off;
  return layout;
}

// Finite-difference step and owning view per packed parameter.
void describe_params(const ParamLayout& layout, std::vector<double>& steps,
                     std::vector<int>& owner) {
  steps.assign(static_cast<std::size_t>(layout.total), 0.0);
  owner.assign(static_cast<std::size_t>(layout.total), 0);
  for (int v = 0; v < static_cast<int>(layout.views.size()); ++v) {
    const auto& lv = layout.views[v];
    for (int i = 0; i < 4; ++i) {
      steps[lv.k + i] = 1e-2;  // pixels
      owner[lv.k + i] = v;
    }
    if (lv.pose >= 0) {
      for (int i = 0; i < 6; ++i) {
        steps[lv.pose + i] = 1e-5;  // radians / meters
        owner[lv.pose + i] = v;
      }
    }
    if (lv.a >= 0) {
      steps[lv.a] = 1e-5;
      owner[lv.a] = v;
    }
    steps[lv.b] = 1e-5;  // meters
    owner[lv.b] = v;
  }
}

RigState apply_step(const RigState& base, const ParamLayout& layout,
                    const Eigen::VectorXd& h) {
  RigState s = base;
  for (std::size_t v = 0; v < layout.views.size(); ++v) {
    const auto& lv = layout.views[v];
    s.k[v].fx += h[lv.k + 0];
    s.k[v].fy += h[lv.k + 1];
    s.k[v].cx += h[lv.k + 2];
    s.k[v].cy += h[lv.k + 3];
    if (lv.pose >= 0) {
      const Vec3 w(h[lv.pose + 0], h[lv.pose + 1], h[lv.pose + 2]);
      const Vec3 tau(h[lv.pose + 3], h[lv.pose + 4], h[lv.pose + 5]);
      s.p[v].r = base.p[v].r * so3_exp(w);
      s.p[v].t = base.p[v].t + tau;
    }
    // Multiplicative gain update: the gain stays positive by construction,
    // and the matching log-gain prior makes a collapse of a view's depth
    // scale geometrically expensive rather than one unit of parameter away.
    if (lv.a >= 0) s.ab[v].a = base.ab[v].a * std::exp(h[lv.a]);
    s.ab[v].b += h[lv.b];
  }
  return s;
}

struct Slot {
  int v = 0;  // source view
  int s = 0;  // sample index within the source view
  int w = 0;  // target view
};

// Everything fixed across the optimization: samples, slot table, prior row
// layout, and references to the observations.
struct Problem {
  const MultiViewFrame* frame = nullptr;
  const HintSet* hints = nullptr;
  const RectifierConfig* cfg = nullptr;
  std::vector<std::vector<std::pair<int, int>>> samples;
  std::vector<std::vector<double>> sample_depth;  // raw source depths
  std::vector<Slot> slots;
  std::vector<std::vector<int>> slots_by_view;  // geo slots touching a view
  int geo_rows = 0;
  int prior_rows = 0;

  int rows() const { return geo_rows + prior_rows; }
};

Problem build_problem(const MultiViewFrame& frame, const HintSet& hints,
                      const RectifierConfig& cfg,
                      const std::vector<std::vector<std::pair<int, int>>>& samples) {
  Problem pb;
  pb.frame = &frame;
  pb.hints = &hints;
  pb.cfg = &cfg;
  pb.samples = samples;

  const int V = static_cast<int>(frame.views.size());
  pb.sample_depth.resize(static_cast<std::size_t>(V));
  pb.slots_by_view.resize(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) {
    for (const auto& [row, col] : pb.samples[v]) {
      pb.sample_depth[v].push_back(
          static_cast<double>(frame.views[v].depth.at(row, col)));
    }
  }
  for (int v = 0; v < V; ++v) {
    for (int s = 0; s < static_cast<int>(pb.samples[v].size()); ++s) {
      for (int w = 0; w < V; ++w) {
        if (w == v) continue;
        const int slot = static_cast<int>(pb.slots.size());
        pb.slots.push_back({v, s, w});
        pb.slots_by_view[v].push_back(slot);
        pb.slots_by_view[w].push_back(slot);
      }
    }
  }
  pb.geo_rows = static_cast<int>(pb.slots.size());

  int prior = 0;
  for (int v = 0; v < V; ++v) {
    if (hints.views[v].has_intrinsics) prior += 4;
    if (v > 0 && hints.views[v].has_pose) prior += 6;
    if (hints.views[v].has_depth) prior += static_cast<int>(pb.samples[v].size());
    if (v > 0) prior += 1;  // log-gain guard row
  }
  pb.prior_rows = prior;
  return pb;
}

// sqrt weight of the per-view log-gain guard row.
constexpr double kLogGainWeight = 1.0;

// Footprints folding more than this in corrected target depth straddle a
// discontinuity and are excluded from the fit (not from reporting).
constexpr double kMaxFootprintSpread = 0.005;

// The per-slot mask stores SlotState values.
void eval_geo_slot(const Problem& pb, const RigState& s, int slot_id, Eigen::VectorXd& r,
                   std::vector<std::uint8_t>& state, Eigen::VectorXd& border) {
  const Slot& slot = pb.slots[slot_id];
  const auto& [row, col] = pb.samples[slot.v][slot.s];
  const SlotEval se = slot_residual(
      s.k[slot.v], s.p[slot.v], s.ab[slot.v], s.k[slot.w], s.p[slot.w], s.ab[slot.w],
      pb.frame->views[slot.w].depth, row, col, pb.sample_depth[slot.v][slot.s],
      kMaxFootprintSpread);
  r[slot_id] = se.state == SlotState::invalid ? 0.0 : se.r;
  state[slot_id] = static_cast<std::uint8_t>(se.state);
  border[slot_id] = se.border;
}

void eval_priors(const Problem& pb, const RigState& s, Eigen::VectorXd& r) {
  const double sk = std::sqrt(pb.cfg->lambda_intrinsics);
  const double sp = std::sqrt(pb.cfg->lambda_pose);
  const double sd = std::sqrt(pb.cfg->lambda_depth);
  int row = pb.geo_rows;
  const int V = static_cast<int>(pb.samples.size());
  for (int v = 0; v < V; ++v) {
    const auto& hv = pb.hints->views[v];
    if (hv.has_intrinsics) {
      r[row++] = sk * (s.k[v].fx - hv.k.fx);
      r[row++] = sk * (s.k[v].fy - hv.k.fy);
      r[row++] = sk * (s.k[v].cx - hv.k.cx);
      r[row++] = sk * (s.k[v].cy - hv.k.cy);
    }
    if (v > 0 && hv.has_pose) {
      const CameraPose rel = hv.p.inverse() * s.p[v];
      const Vec3 w = so3_log(rel.r);
      for (int i = 0; i < 3; ++i) r[row++] = sp * w[i];
      for (int i = 0; i < 3; ++i) r[row++] = sp * rel.t[i];
    }
    if (hv.has_depth) {
      const auto& dv = pb.sample_depth[v];
      for (double d : dv) {
        r[row++] = sd * ((s.ab[v].a - 1.0) * d + s.ab[v].b);
      }
    }
    // Always-on log-gain guard: centimeter-scale depth corrections cost
    // almost nothing, while collapsing a view's depth scale toward zero
    // (a degenerate consensus that wide truncation bands otherwise reward)
    // is quadratically prohibitive in log space.
    if (v > 0) {
      r[row++] = kLogGainWeight * std::log(s.ab[v].a);
    }
  }
}

void eval_full(const Problem& pb, const RigState& s, Eigen::VectorXd& r,
               std::vector<std::uint8_t>& usable, Eigen::VectorXd& border) {
  r.setZero(pb.rows());
  usable.assign(static_cast<std::size_t>(pb.geo_rows), 0);
  border.setZero(pb.geo_rows);
  for (int i = 0; i < pb.geo_rows; ++i) eval_geo_slot(pb, s, i, r, usable, border);
  eval_priors(pb, s, r);
}

double huber(double r, double delta) {
  const double a = std::abs(r);
  return a <= delta ? 0.5 * r * r : delta * (a - 0.5 * delta);
}

// Robustified total over the member slots, with the loss truncated
// asymmetrically: a positive residual means the target camera saw a nearer
// surface than the projected point, which is exactly the signature of
// occlusion, so the positive band anneals down until hidden points carry no
// pull. A negative residual cannot arise from occlusion (a reading farther
// than the surface means the footprint straddles an edge, which the fold
// gate already removes), so the negative band never shrinks below delta and
// genuinely misplaced geometry keeps pulling the fit home. Member slots
// that become invalid pay a fixed penalty equal to the larger truncated
// loss, so pushing samples out of view never helps; slots outside the
// membership set do not contribute at all, so capturing extra samples never
// helps either. Gated slots contribute nothing in either direction, so
// drifting across a discontinuity footprint neither pays nor earns.
double total_cost(const Problem& pb, const Eigen::VectorXd& r,
                  const std::vector<std::uint8_t>& state,
                  const Eigen::VectorXd& border,
                  const std::vector<std::uint8_t>& member, double band_pos,
                  double band_neg) {
  const double delta = pb.cfg->huber_delta;
  const double miss_pos = huber(band_pos, delta);
  const double miss_neg = huber(band_neg, delta);
  const double miss_lost = std::max(miss_pos, miss_neg);
  double cost = 0.0;
  for (int i = 0; i < pb.geo_rows; ++i) {
    if (!member[i]) continue;
    if (state[i] == static_cast<std::uint8_t>(SlotState::ok)) {
      double in;
      if (r[i] >= 0.0) {
        in = r[i] <= band_pos ? huber(r[i], delta) : miss_pos;
      } else {
        in = -r[i] <= band_neg ? huber(r[i], delta) : miss_neg;
      }
      // Border fade blends toward the lost-sample penalty so the cost is
      // continuous when the projection leaves the usable footprint region.
      cost += border[i] * in + (1.0 - border[i]) * miss_lost;
    } else if (state[i] == static_cast<std::uint8_t>(SlotState::invalid)) {
      cost += miss_lost;
    }
  }
  for (int i = pb.geo_rows; i < pb.rows(); ++i) {
    cost += 0.5 * r[i] * r[i];
  }
  return cost;
}

int usable_count(const std::vector<std::uint8_t>& state) {
  int n = 0;
  for (std::uint8_t u : state) {
    n += u == static_cast<std::uint8_t>(SlotState::ok) ? 1 : 0;
  }
  return n;
}

// Median of per-view median depths: the typical camera-to-scene distance,
// used to size the fallback ring when no pose hints exist.
double median_scene_distance(const MultiViewFrame& frame) {
  std::vector<double> meds;
  for (const auto& view : frame.views) {
    std::vector<double> d;
    for (std::size_t i = 0; i < view.depth.data.size(); i += 7) {
      if (depth_valid(view.depth.data[i])) d.push_back(view.depth.data[i]);
    }
    if (d.empty()) continue;
    const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    meds.push_back(*mid);
  }
  if (meds.empty()) return 3.0;
  const auto mid = meds.begin() + static_cast<std::ptrdiff_t>(meds.size() / 2);
  std::nth_element(meds.begin(), mid, meds.end());
  return *mid;
}

RigState initial_state(const MultiViewFrame& frame, const HintSet& hints,
                       double ring_distance, double ring_pitch) {
  const int V = static_cast<int>(frame.views.size());
  RigState s;
  s.k.resize(static_cast<std::size_t>(V));
  s.p.resize(static_cast<std::size_t>(V));
  s.ab.resize(static_cast<std::size_t>(V));

  // Fallback layout: cameras on a ring facing the room center from the
  // given distance, pitched down by the given angle, re-expressed relative
  // to view 0's anchor.
  const double rad = ring_distance * std::cos(ring_pitch);
  const double hgt = ring_distance * std::sin(ring_pitch);
  std::vector<CameraPose> circle(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) {
    const double ang = 2.0 * std::numbers::pi * v / V;
    circle[v] = look_at(Vec3(rad * std::cos(ang), rad * std::sin(ang), hgt),
                        Vec3::Zero());
  }
  const CameraPose base0 = hints.views[0].has_pose ? hints.views[0].p : CameraPose{};
  const CameraPose circle0_inv = circle[0].inverse();

  for (int v = 0; v < V; ++v) {
    const auto& hv = hints.views[v];
    if (hv.has_intrinsics) {
      s.k[v] = hv.k;
    } else {
      const int w = frame.views[v].rgb.width;
      const int h = frame.views[v].rgb.height;
      s.k[v] = {0.6 * w, 0.6 * w, 0.5 * w, 0.5 * h};
    }
    if (hv.has_pose) {
      s.p[v] = hv.p;
    } else {
      s.p[v] = base0 * (circle0_inv * circle[v]);
    }
  }
  return s;
}

struct LadderOutcome {
  RigState state;
  bool converged = false;
};

// Fixed-band score used to rank the final states of independent starts.
// Membership and truncation schedules differ per run, so the comparison has
// to be over the full slot set with one bounded per-slot loss: in-band slots
// pay their Huber cost, everything else pays the one-delta miss.
double basin_score(const Problem& pb, const RigState& s, double delta) {
  Eigen::VectorXd r(pb.rows());
  Eigen::VectorXd border(pb.geo_rows);
  std::vector<std::uint8_t> usable;
  eval_full(pb, s, r, usable, border);
  const double miss = huber(delta, delta);
  double sum = 0.0;
  for (int i = 0; i < pb.geo_rows; ++i) {
    if (usable[i] == static_cast<std::uint8_t>(SlotState::ok) &&
        std::abs(r[i]) <= delta) {
      sum += huber(r[i], delta);
    } else {
      sum += miss;
    }
  }
  return sum;
}

LadderOutcome run_ladder(const Problem& pb, const ParamLayout& layout,
                         const std::vector<double>& steps,
                         const std::vector<int>& owner,
                         const RectifierConfig& cfg, RigState state) {
  const int P = layout.total;
  Eigen::VectorXd r(pb.rows());
  Eigen::VectorXd border(pb.geo_rows);
  std::vector<std::uint8_t> usable;
  Eigen::MatrixXd jw(pb.rows(), P);
  Eigen::VectorXd rw(pb.rows());
  Eigen::MatrixXd normal;
  Eigen::VectorXd gradient;

  // Continuation on the truncation band: wide bands let a grossly wrong
  // initialization feel distant structure, and the ladder then shrinks the
  // trusted positive range below the occlusion scale (points hidden behind
  // nearby geometry leave centimeter-level positive residuals on clean
  // footprints) so irreducible samples stop dragging the fit. The negative
  // band floors at delta: those residuals are calibration signal, and
  // trimming them with the ladder would leave only depth-insensitive
  // surfaces in the active set, freezing whatever error remains. Slot
  // membership is frozen at each stage start so usability changes are never
  // rewarded inside a stage.
  const double kBandScales[] = {256.0, 64.0, 16.0, 4.0, 2.0, 1.0, 0.5, 0.2, 0.1};
  bool converged = false;

  for (double band_scale : kBandScales) {
    const double band = band_scale * cfg.huber_delta;
    const double band_neg = std::max(band, cfg.huber_delta);
    eval_full(pb, state, r, usable, border);
    std::vector<std::uint8_t> member(usable.size());
    for (std::size_t i = 0; i < usable.size(); ++i) {
      member[i] = usable[i] == static_cast<std::uint8_t>(SlotState::ok) ? 1 : 0;
    }
    double cost = total_cost(pb, r, usable, border, member, band, band_neg);
    double damping = cfg.initial_damping;
    bool stage_converged = false;
    bool jacobian_valid = false;
    int rejected_streak = 0;

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
      if (!jacobian_valid) {
        // Row weights: IRLS for the robust loss, 1 for priors, 0 for
        // non-member, unusable, or trimmed slots.
        Eigen::VectorXd sqrt_w(pb.rows());
        for (int i = 0; i < pb.geo_rows; ++i) {
          const double ab = std::abs(r[i]);
          const double side_band = r[i] >= 0.0 ? band : band_neg;
          if (!member[i] || usable[i] != static_cast<std::uint8_t>(SlotState::ok) ||
              ab > side_band) {
            sqrt_w[i] = 0.0;
            continue;
          }
          sqrt_w[i] = std::sqrt(border[i]) *
                      (ab <= cfg.huber_delta ? 1.0 : std::sqrt(cfg.huber_delta / ab));
        }
        for (int i = pb.geo_rows; i < pb.rows(); ++i) sqrt_w[i] = 1.0;

        jw.setZero();
        parallel_for(static_cast<std::size_t>(P), [&](std::size_t j) {
          Eigen::VectorXd h = Eigen::VectorXd::Zero(P);
          h[static_cast<int>(j)] = steps[j];
          const RigState fwd = apply_step(state, layout, h);
          h[static_cast<int>(j)] = -steps[j];
          const RigState bwd = apply_step(state, layout, h);
          Eigen::VectorXd rp = r;
          Eigen::VectorXd rm = r;
          Eigen::VectorXd bp = border;
          Eigen::VectorXd bm = border;
          std::vector<std::uint8_t> up = usable;
          std::vector<std::uint8_t> um = usable;
          for (int slot : pb.slots_by_view[owner[j]]) {
            eval_geo_slot(pb, fwd, slot, rp, up, bp);
            eval_geo_slot(pb, bwd, slot, rm, um, bm);
          }
          eval_priors(pb, fwd, rp);
          eval_priors(pb, bwd, rm);
          const double inv = 0.5 / steps[j];
          const auto ok = static_cast<std::uint8_t>(SlotState::ok);
          for (int i = 0; i < pb.geo_rows; ++i) {
            jw(i, static_cast<int>(j)) = (usable[i] == ok && up[i] == ok && um[i] == ok)
                                             ? (rp[i] - rm[i]) * inv * sqrt_w[i]
                                             : 0.0;
          }
          for (int i = pb.geo_rows; i < pb.rows(); ++i) {
            jw(i, static_cast<int>(j)) = (rp[i] - rm[i]) * inv;
          }
        });
        for (int i = 0; i < pb.rows(); ++i) rw[i] = r[i] * sqrt_w[i];
        normal = jw.transpose() * jw;
        gradient = jw.transpose() * rw;
        jacobian_valid = true;
      }

      Eigen::MatrixXd damped = normal;
      for (int i = 0; i < P; ++i) {
        damped(i, i) += damping * std::max(normal(i, i), 1e-12);
      }
      const Eigen::VectorXd h = damped.ldlt().solve(-gradient);

      bool accepted = false;
      bool evaluated = false;
      double cand_cost = cost;
      if (h.allFinite()) {
        const RigState cand = apply_step(state, layout, h);
        Eigen::VectorXd rc(pb.rows());
        Eigen::VectorXd bc(pb.geo_rows);
        std::vector<std::uint8_t> uc;
        eval_full(pb, cand, rc, uc, bc);
        cand_cost = total_cost(pb, rc, uc, bc, member, band, band_neg);
        evaluated = true;
        if (cand_cost < cost) {
          accepted = true;
          state = cand;
          r.swap(rc);
          usable.swap(uc);
          border.swap(bc);
        }
      }

      if (cfg.trace) {
        (*cfg.trace) << "band " << band << " iter " << iter << " cost "
                     << (accepted ? cand_cost : cost) << " damping " << damping
                     << (accepted ? " accepted" : " rejected") << "\n";
      }

      // Steps below the finite-difference probe resolution cannot be
      // distinguished from noise by this Jacobian: stationary. This is the
      // exit when the fit pins against a frustum or footprint boundary,
      // where the cost jumps by the miss penalty in the step direction and
      // no cost-based test can settle.
      double rel_step = 0.0;
      if (h.allFinite()) {
        for (int j = 0; j < P; ++j) {
          rel_step = std::max(rel_step, std::abs(h[j]) / steps[j]);
        }
      } else {
        rel_step = std::numeric_limits<double>::infinity();
      }

      const double flat = cfg.tolerance * std::max(cost, 1e-30);
      if (accepted) {
        const double drop = cost - cand_cost;
        cost = cand_cost;
        damping = std::max(damping * cfg.damping_down, 1e-12);
        jacobian_valid = false;
        rejected_streak = 0;
        if (drop <= flat || rel_step <= 1e-3) {
          stage_converged = true;
          break;
        }
      } else {
        // A rejected step that changes the cost by less than the tolerance
        // means the quadratic model found no descent left: stationary.
        if (evaluated && cand_cost - cost <= flat) {
          stage_converged = true;
          break;
        }
        if (rel_step <= 1e-3) {
          stage_converged = true;
          break;
        }
        damping = std::min(damping * cfg.damping_up, 1e12);
        if (++rejected_streak > cfg.max_rejected_steps) break;
      }
    }
    converged = stage_converged;
  }
  return {std::move(state), converged};
}

}  // namespace

std::vector<ResidualSample> cross_view_residuals(
    const RigCalibration& rig, const std::vector<DepthAffine>& corrections,
    const MultiViewFrame& frame,
    const std::vector<std::vector<std::pair<int, int>>>& samples) {
  const int V = static_cast<int>(frame.views.size());
  if (rig.view_count() != V || static_cast<int>(corrections.size()) != V ||
      static_cast<int>(samples.size()) != V) {
    throw Error(Errc::dimension_mismatch, "cross_view_residuals: view counts disagree");
  }

  std::vector<ResidualSample> out;
  for (int v = 0; v < V; ++v) {
    for (std::size_t s = 0; s < samples[v].size(); ++s) {
      const auto& [row, col] = samples[v][s];
      if (!frame.views[v].depth.in_bounds(row, col) ||
          !frame.views[v].depth.valid_at(row, col)) {
        throw Error(Errc::invalid_depth, "cross_view_residuals: sample has no valid depth");
      }
      const double d_raw = static_cast<double>(frame.views[v].depth.at(row, col));
      for (int w = 0; w < V; ++w) {
        if (w == v) continue;
        const SlotEval se = slot_residual(
            rig.views[v].k, rig.views[v].p, corrections[v], rig.views[w].k,
            rig.views[w].p, corrections[w], frame.views[w].depth, row, col, d_raw);
        if (se.state != SlotState::ok) continue;
        ResidualSample rs;
        rs.source_view = v;
        rs.pixel = pixel_center(row, col);
        rs.target_view = w;
        rs.residual = rig.scale * se.r;
        out.push_back(rs);
      }
    }
  }
  if (static_cast<int>(out.size()) < 6) {
    throw Error(Errc::insufficient_overlap, "fewer than 6 usable cross-view residuals");
  }
  return out;
}

ScaleEstimate recover_scale(const std::vector<DepthMap>& unscaled,
                            const std::vector<DepthMap>& anchor) {
  if (anchor.empty()) return {1.0, false};
  if (unscaled.size() != anchor.size()) {
    throw Error(Errc::dimension_mismatch, "recover_scale: map count mismatch");
  }

  std::vector<double> ratios;
  for (std::size_t i = 0; i < unscaled.size(); ++i) {
    const DepthMap& u = unscaled[i];
    const DepthMap& a = anchor[i];
    if (u.width != a.width || u.height != a.height) {
      throw Error(Errc::dimension_mismatch, "recover_scale: map dimensions mismatch");
    }
    for (std::size_t j = 0; j < u.data.size(); ++j) {
      if (depth_valid(u.data[j]) && depth_valid(a.data[j])) {
        ratios.push_back(a.data[j] / u.data[j]);
      }
    }
  }
  if (ratios.size() < 100) {
    throw Error(Errc::insufficient_anchor,
                "recover_scale: fewer than 100 jointly valid pixels");
  }
  std::sort(ratios.begin(), ratios.end());
  const std::size_t n = ratios.size();
  const double m = (n % 2 == 1)
                       ? ratios[n / 2]
                       : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
  return {m, true};
}

RectifiedGeometry rectify(const MultiViewFrame& first_frame, const HintSet& hints,
                          const std::vector<std::vector<DepthMap>>& depth_sequence,
                          const RectifierConfig& cfg) {
  cfg.validate();
  const int V = static_cast<int>(first_frame.views.size());
  if (V < 2) throw Error(Errc::invariant_violation, "rectify: need at least two views");
  if (static_cast<int>(hints.views.size()) != V) {
    throw Error(Errc::dimension_mismatch, "rectify: hint count does not match views");
  }

  std::vector<std::vector<std::pair<int, int>>> samples(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) {
    samples[v] = stratified_samples(first_frame.views[v].depth, cfg.samples_per_view,
                                    cfg.seed, v);
  }

  const Problem pb = build_problem(first_frame, hints, cfg, samples);
  const ParamLayout layout = make_layout(V);
  std::vector<double> steps;
  std::vector<int> owner;
  describe_params(layout, steps, owner);

  // The canonical start must already see enough cross-view structure.
  {
    RigState probe = initial_state(first_frame, hints, 3.0, 0.0);
    Eigen::VectorXd r(pb.rows());
    Eigen::VectorXd border(pb.geo_rows);
    std::vector<std::uint8_t> usable;
    eval_full(pb, probe, r, usable, border);
    if (usable_count(usable) < 6) {
      throw Error(Errc::insufficient_overlap, "fewer than 6 usable cross-view residuals");
    }
  }

  // Pose-free runs descend from a generic camera ring, and one ring shape
  // rarely sits in the right basin. Calibration hints sharpen the cost
  // enough to rank basins reliably, so hinted runs probe a ring sized to
  // the observed scene distance at several pitches and keep the best final
  // fit; the hint-free run keeps the single canonical start and lives with
  // it.
  bool any_pose = false;
  bool any_cal = false;
  for (const auto& hv : hints.views) {
    any_pose = any_pose || hv.has_pose;
    any_cal = any_cal || hv.has_intrinsics || hv.has_depth;
  }
  std::vector<std::pair<double, double>> rings = {{3.0, 0.0}};
  if (!any_pose && any_cal) {
    const double dist = median_scene_distance(first_frame);
    const double deg = std::numbers::pi / 180.0;
    rings = {{3.0, 0.0}, {dist, 0.0}, {dist, 25.0 * deg}, {dist, 50.0 * deg}};
  }

  RigState state;
  bool converged = false;
  double best_score = std::numeric_limits<double>::infinity();
  for (const auto& [dist, pitch] : rings) {
    RigState start = initial_state(first_frame, hints, dist, pitch);
    if (rings.size() > 1) {
      Eigen::VectorXd r(pb.rows());
      Eigen::VectorXd border(pb.geo_rows);
      std::vector<std::uint8_t> usable;
      eval_full(pb, start, r, usable, border);
      if (usable_count(usable) < 6) continue;
      if (cfg.trace) (*cfg.trace) << "start ring " << dist << " " << pitch << "\n";
    }
    LadderOutcome run = run_ladder(pb, layout, steps, owner, cfg, std::move(start));
    const double score = basin_score(pb, run.state, cfg.huber_delta);
    if (cfg.trace && rings.size() > 1) {
      (*cfg.trace) << "start ring " << dist << " " << pitch << " score " << score
                   << "\n";
    }
    if (score < best_score) {
      best_score = score;
      state = std::move(run.state);
      converged = run.converged;
    }
  }

  RectifiedGeometry out;
  out.converged = converged;
  out.rig.views.resize(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) {
    out.rig.views[v].k = state.k[v];
    out.rig.views[v].p = state.p[v];
  }
  out.rig.scale = 1.0;
  out.depth_correction = state.ab;

  std::vector<DepthMap> anchor_unscaled;
  std::vector<DepthMap> anchor_observed;
  for (int v = 0; v < V; ++v) {
    if (!hints.views[v].has_depth) continue;
    anchor_unscaled.push_back(
        apply_depth_affine(first_frame.views[v].depth, state.ab[v]));
    anchor_observed.push_back(first_frame.views[v].depth);
  }
  const ScaleEstimate scale = recover_scale(anchor_unscaled, anchor_observed);
  out.rig.scale = scale.m;
  out.scale_observable = scale.observable;

  out.per_frame_depth.reserve(depth_sequence.size());
  for (const auto& frame_depth : depth_sequence) {
    if (static_cast<int>(frame_depth.size()) != V) {
      throw Error(Errc::dimension_mismatch, "rectify: depth sequence view count mismatch");
    }
    std::vector<DepthMap> corrected;
    corrected.reserve(frame_depth.size());
    for (int v = 0; v < V; ++v) {
      corrected.push_back(apply_depth_affine(frame_depth[v], state.ab[v]));
    }
    out.per_frame_depth.push_back(std::move(corrected));
  }
  return out;
}

RectifiedGeometry exact_geometry(const RigCalibration& rig) {
  RectifiedGeometry out;
  out.rig = rig;
  out.depth_correction.assign(rig.views.size(), DepthAffine{});
  out.converged = true;
  out.scale_observable = true;
  return out;
}

}  // namespace roomtrack
