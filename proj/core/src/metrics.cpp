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

// Arithmetic conventions, pinned so an independent transcription of the
// definitions reproduces these values bit-for-bit:
//   - frames are visited in ascending time order, thresholds in given order;
//   - events are tallied as integers and cast to double only at the end;
//   - each ratio is a single division; percentages are 100.0 * sum / count;
//   - position error is Eigen's .norm() of the double difference vector;
//   - the median of an even count is 0.5 * (lower + upper).

#include "roomtrack/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "roomtrack/error.hpp"
#include "roomtrack/parallel.hpp"

namespace roomtrack {

namespace {

void check_thresholds(const std::vector<double>& thresholds) {
  if (thresholds.empty()) {
    throw Error(Errc::invalid_argument, "metrics: thresholds must be nonempty");
  }
  for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
    if (!(thresholds[i] < thresholds[i + 1])) {
      throw Error(Errc::invalid_argument, "metrics: thresholds must be strictly ascending");
    }
  }
  if (!(thresholds.front() > 0.0)) {
    throw Error(Errc::invalid_argument, "metrics: thresholds must be positive");
  }
}

int count_visible(const std::vector<std::uint8_t>& gt_vis) {
  int n = 0;
  for (std::uint8_t g : gt_vis) n += g ? 1 : 0;
  return n;
}

double sorted_median(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return (n % 2 == 1) ? values[n / 2]
                      : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

double occlusion_accuracy(const std::vector<double>& pred_vis,
                          const std::vector<std::uint8_t>& gt_vis, double tau_v) {
  if (pred_vis.size() != gt_vis.size()) {
    throw Error(Errc::dimension_mismatch, "occlusion_accuracy: length mismatch");
  }
  if (pred_vis.empty()) {
    throw Error(Errc::undefined_metric, "occlusion_accuracy: no frames");
  }
  int matches = 0;
  for (std::size_t t = 0; t < pred_vis.size(); ++t) {
    const bool pv = pred_vis[t] >= tau_v;
    const bool gv = gt_vis[t] != 0;
    if (pv == gv) ++matches;
  }
  return 100.0 * static_cast<double>(matches) / static_cast<double>(pred_vis.size());
}

double delta_avg(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt,
                 const std::vector<std::uint8_t>& gt_vis,
                 const std::vector<double>& thresholds) {
  if (pred.size() != gt.size() || pred.size() != gt_vis.size()) {
    throw Error(Errc::dimension_mismatch, "delta_avg: length mismatch");
  }
  check_thresholds(thresholds);
  const int visible = count_visible(gt_vis);
  if (visible == 0) throw Error(Errc::undefined_metric, "delta_avg: no GT-visible frame");

  double acc = 0.0;
  for (double theta : thresholds) {
    int hits = 0;
    for (std::size_t t = 0; t < pred.size(); ++t) {
      if (!gt_vis[t]) continue;
      if ((pred[t] - gt[t]).norm() < theta) ++hits;
    }
    acc += static_cast<double>(hits) / static_cast<double>(visible);
  }
  return 100.0 * acc / static_cast<double>(thresholds.size());
}

double average_jaccard(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt,
                       const std::vector<double>& pred_vis,
                       const std::vector<std::uint8_t>& gt_vis,
                       const std::vector<double>& thresholds, double tau_v) {
  if (pred.size() != gt.size() || pred.size() != pred_vis.size() ||
      pred.size() != gt_vis.size()) {
    throw Error(Errc::dimension_mismatch, "average_jaccard: length mismatch");
  }
  check_thresholds(thresholds);
  if (count_visible(gt_vis) == 0) {
    throw Error(Errc::undefined_metric, "average_jaccard: no GT-visible frame");
  }

  double acc = 0.0;
  for (double theta : thresholds) {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    for (std::size_t t = 0; t < pred.size(); ++t) {
      const bool pv = pred_vis[t] >= tau_v;
      const bool gv = gt_vis[t] != 0;
      const bool ok = gv && (pred[t] - gt[t]).norm() < theta;
      if (pv && ok) ++tp;
      if (pv && !ok) ++fp;
      if (gv && !(pv && (pred[t] - gt[t]).norm() < theta)) ++fn;
    }
    const int denom = tp + fp + fn;
    acc += denom == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(denom);
  }
  return 100.0 * acc / static_cast<double>(thresholds.size());
}

double median_trajectory_error(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt,
                               const std::vector<std::uint8_t>& gt_vis) {
  if (pred.size() != gt.size() || pred.size() != gt_vis.size()) {
    throw Error(Errc::dimension_mismatch, "median_trajectory_error: length mismatch");
  }
  std::vector<double> errors;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    if (gt_vis[t]) errors.push_back((pred[t] - gt[t]).norm());
  }
  if (errors.empty()) {
    throw Error(Errc::undefined_metric, "median_trajectory_error: no GT-visible frame");
  }
  return sorted_median(errors);
}

TrackEval evaluate_track(const TrackComparison& c, const MetricConfig& cfg) {
  TrackEval e;
  e.aj = average_jaccard(c.pred, c.gt, c.pred_vis, c.gt_vis, cfg.thresholds, cfg.tau_v);
  e.delta_avg = delta_avg(c.pred, c.gt, c.gt_vis, cfg.thresholds);
  e.oa = occlusion_accuracy(c.pred_vis, c.gt_vis, cfg.tau_v);
  e.mte = median_trajectory_error(c.pred, c.gt, c.gt_vis);
  e.thresholds = cfg.thresholds;
  return e;
}

TrackEval evaluate_tracks(const std::vector<TrackComparison>& tracks,
                          const MetricConfig& cfg) {
  if (tracks.empty()) {
    throw Error(Errc::undefined_metric, "evaluate_tracks: no tracks");
  }
  std::vector<TrackEval> per(tracks.size());
  parallel_for(tracks.size(), [&](std::size_t i) {
    per[i] = evaluate_track(tracks[i], cfg);
  });

  TrackEval out;
  out.thresholds = cfg.thresholds;
  for (const TrackEval& e : per) {
    out.aj += e.aj;
    out.delta_avg += e.delta_avg;
    out.oa += e.oa;
    out.mte += e.mte;
  }
  const double n = static_cast<double>(tracks.size());
  out.aj /= n;
  out.delta_avg /= n;
  out.oa /= n;
  out.mte /= n;
  return out;
}

DepthEval depth_eval(const DepthMap& pred, const DepthMap& gt) {
  DepthEvalAccumulator acc;
  acc.add(pred, gt);
  return acc.result();
}

void DepthEvalAccumulator::add(const DepthMap& pred, const DepthMap& gt) {
  if (pred.width != gt.width || pred.height != gt.height) {
    throw Error(Errc::dimension_mismatch, "depth_eval: map dimensions mismatch");
  }
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    if (!depth_valid(pred.data[i]) || !depth_valid(gt.data[i])) continue;
    const double e = pred.data[i] - gt.data[i];
    abs_rel_sum_ += std::abs(e) / gt.data[i];
    sq_sum_ += e * e;
    ++count_;
  }
}

DepthEval DepthEvalAccumulator::result() const {
  if (count_ == 0) {
    throw Error(Errc::undefined_metric, "depth_eval: no jointly valid pixels");
  }
  DepthEval e;
  e.abs_rel = abs_rel_sum_ / static_cast<double>(count_);
  e.rmse = std::sqrt(sq_sum_ / static_cast<double>(count_));
  e.valid_pixels = count_;
  return e;
}

ConsistencyEval consistency_eval(
    const RigCalibration& rig, const std::vector<DepthAffine>& corrections,
    const MultiViewFrame& frame,
    const std::vector<std::vector<std::pair<int, int>>>& samples) {
  const std::vector<ResidualSample> res =
      cross_view_residuals(rig, corrections, frame, samples);
  std::vector<double> abs_res;
  abs_res.reserve(res.size());
  double sum = 0.0;
  for (const ResidualSample& r : res) {
    const double a = std::abs(r.residual);
    abs_res.push_back(a);
    sum += a;
  }
  ConsistencyEval e;
  e.samples = abs_res.size();
  e.mean = sum / static_cast<double>(abs_res.size());
  e.median = sorted_median(abs_res);
  return e;
}

Similarity Similarity::inverse() const {
  Similarity inv;
  inv.scale = 1.0 / scale;
  inv.r = r.transpose();
  inv.t = -(inv.scale * (inv.r * t));
  inv.rms = rms * inv.scale;
  return inv;
}

Similarity align_frames(const std::vector<Vec3>& source, const std::vector<Vec3>& target) {
  if (source.size() != target.size()) {
    throw Error(Errc::dimension_mismatch, "align_frames: point count mismatch");
  }
  const std::size_t n = source.size();
  if (n < 3) {
    throw Error(Errc::degenerate_alignment, "align_frames: need at least 3 correspondences");
  }

  Vec3 mu_s = Vec3::Zero();
  Vec3 mu_t = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    mu_s += source[i];
    mu_t += target[i];
  }
  mu_s /= static_cast<double>(n);
  mu_t /= static_cast<double>(n);

  Mat3 cov = Mat3::Zero();
  double var_s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 ds = source[i] - mu_s;
    const Vec3 dt = target[i] - mu_t;
    cov += dt * ds.transpose();
    var_s += ds.squaredNorm();
  }
  cov /= static_cast<double>(n);
  var_s /= static_cast<double>(n);
  if (!(var_s > 1e-24)) {
    throw Error(Errc::degenerate_alignment, "align_frames: source has no spread");
  }

  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  if (sv(1) <= 1e-12 * std::max(sv(0), 1e-300)) {
    throw Error(Errc::degenerate_alignment, "align_frames: collinear configuration");
  }

  Vec3 d = Vec3::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) d(2) = -1.0;

  Similarity sim;
  sim.r = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
  sim.scale = sv.dot(d) / var_s;
  sim.t = mu_t - sim.scale * (sim.r * mu_s);

  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sq += (sim.apply(source[i]) - target[i]).squaredNorm();
  }
  sim.rms = std::sqrt(sq / static_cast<double>(n));
  return sim;
}

}  // namespace roomtrack
