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

#include "roomtrack/track.hpp"

#include <cmath>
#include <optional>

#include "roomtrack/error.hpp"
#include "roomtrack/parallel.hpp"

namespace roomtrack {

void TrackerConfig::validate() const {
  if (k < 1) throw Error(Errc::invalid_argument, "tracker: k must be >= 1");
  if (!(sigma_s > 0.0 && sigma_f > 0.0)) {
    throw Error(Errc::invalid_argument, "tracker: kernel widths must be positive");
  }
  if (refine_iterations < 1) {
    throw Error(Errc::invalid_argument, "tracker: refinement iterations must be >= 1");
  }
  if (!(tau_v > 0.0 && tau_v < 1.0)) {
    throw Error(Errc::invalid_argument, "tracker: tau_v must lie in (0, 1)");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(Errc::invalid_argument, "tracker: alpha must lie in [0, 1]");
  }
}

namespace {

using FeatVec = Eigen::Matrix<double, kFeatureDim, 1>;

FeatureDescriptor to_unit_descriptor(const FeatVec& v) {
  const double n = v.norm();
  if (!(n > 1e-12)) {
    return FeatureDescriptor::Constant(
        static_cast<float>(1.0 / std::sqrt(static_cast<double>(kFeatureDim))));
  }
  return (v / n).cast<float>();
}

double feature_similarity(const FeatVec& f, const FeatVec& f_ref, double sigma_f) {
  return std::exp(-(f - f_ref).squaredNorm() / (2.0 * sigma_f * sigma_f));
}

void coast(TrackState& state) {
  state.position += state.velocity;
  state.velocity *= 0.9;
}

}  // namespace

TrackState init_track(const Query& q, const IndexedCloud& cloud,
                      const TrackerConfig& cfg) {
  cfg.validate();
  const std::vector<Neighbor> nbrs = cloud.index.knn(q.p_q, cfg.k);
  const double support = 3.0 * cfg.sigma_s;
  if (nbrs.front().dist2 > support * support) {
    throw Error(Errc::isolated_query, "init_track: no cloud point within 3 sigma_s");
  }

  FeatVec acc = FeatVec::Zero();
  const double inv2s2 = 1.0 / (2.0 * cfg.sigma_s * cfg.sigma_s);
  for (const Neighbor& nb : nbrs) {
    const double w = std::exp(-nb.dist2 * inv2s2);
    acc += w * cloud.cloud.features[nb.index].cast<double>();
  }

  TrackState state;
  state.position = q.p_q;
  state.f_ref = to_unit_descriptor(acc);
  state.velocity = Vec3::Zero();
  state.last_visible = q.t_q;
  return state;
}

StepResult step(TrackState& state, const IndexedCloud& cloud, const TrackerConfig& cfg) {
  if (cloud.cloud.empty()) {
    coast(state);
    return {state.position, 0.0};
  }

  const Vec3 p_prev = state.position;
  const FeatVec f_ref = state.f_ref.cast<double>();
  const double inv2s2 = 1.0 / (2.0 * cfg.sigma_s * cfg.sigma_s);
  const double support = 3.0 * cfg.sigma_s;

  Vec3 p = p_prev + state.velocity;
  std::vector<Neighbor> nbrs;
  for (int r = 0; r < cfg.refine_iterations; ++r) {
    nbrs = cloud.index.knn(p, cfg.k);
    Vec3 num = Vec3::Zero();
    double den = 0.0;
    for (const Neighbor& nb : nbrs) {
      const Vec3& y = cloud.cloud.points[nb.index];
      const double w =
          std::exp(-(y - p).squaredNorm() * inv2s2) *
          feature_similarity(cloud.cloud.features[nb.index].cast<double>(), f_ref,
                             cfg.sigma_f);
      num += w * y;
      den += w;
    }
    if (den >= 1e-12) p = num / den;
  }

  double v = 0.0;
  std::optional<std::size_t> best;
  for (const Neighbor& nb : nbrs) {
    const Vec3& y = cloud.cloud.points[nb.index];
    if ((y - p).norm() >= support) continue;
    const double sim = feature_similarity(cloud.cloud.features[nb.index].cast<double>(),
                                          f_ref, cfg.sigma_f);
    if (sim > v) {
      v = sim;
      best = nb.index;
    }
  }

  if (v >= cfg.tau_v && best) {
    state.position = p;
    state.velocity = p - p_prev;
    const FeatVec blended = (1.0 - cfg.alpha) * f_ref +
                            cfg.alpha * cloud.cloud.features[*best].cast<double>();
    state.f_ref = to_unit_descriptor(blended);
  } else {
    coast(state);
  }
  return {state.position, v};
}

TrackSet track(const std::vector<IndexedCloud>& clouds, const std::vector<Query>& queries,
               const TrackerConfig& cfg) {
  cfg.validate();
  const int T = static_cast<int>(clouds.size());
  for (const Query& q : queries) {
    if (q.t_q < 0 || q.t_q >= T) {
      throw Error(Errc::invalid_argument, "track: query start frame outside sequence");
    }
    if (!q.p_q.allFinite()) {
      throw Error(Errc::invalid_argument, "track: query position must be finite");
    }
  }

  std::vector<std::optional<Track>> done(queries.size());
  std::vector<std::optional<TrackSet::Failure>> failed(queries.size());

  parallel_for(queries.size(), [&](std::size_t qi) {
    const Query& q = queries[qi];
    TrackState state;
    try {
      state = init_track(q, clouds[q.t_q], cfg);
    } catch (const Error& e) {
      if (e.code() != Errc::isolated_query && e.code() != Errc::empty_cloud) throw;
      failed[qi] = TrackSet::Failure{q.id, e.what()};
      return;
    }

    Track tr;
    tr.query_id = q.id;
    tr.t0 = q.t_q;

    // Visibility at the first frame comes from the initialization
    // neighborhood around the given position.
    double v0 = 0.0;
    const std::vector<Neighbor> nbrs = clouds[q.t_q].index.knn(q.p_q, cfg.k);
    const double support = 3.0 * cfg.sigma_s;
    const FeatVec f_ref = state.f_ref.cast<double>();
    for (const Neighbor& nb : nbrs) {
      if (nb.dist2 >= support * support) continue;
      v0 = std::max(v0, feature_similarity(
                            clouds[q.t_q].cloud.features[nb.index].cast<double>(),
                            f_ref, cfg.sigma_f));
    }
    tr.positions.push_back(q.p_q);
    tr.visibility.push_back(v0);

    for (int t = q.t_q + 1; t < T; ++t) {
      const StepResult res = step(state, clouds[t], cfg);
      tr.positions.push_back(res.position);
      tr.visibility.push_back(res.visibility);
      if (res.visibility >= cfg.tau_v) state.last_visible = t;
    }
    done[qi] = std::move(tr);
  });

  TrackSet out;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    if (done[qi]) out.tracks.push_back(std::move(*done[qi]));
    if (failed[qi]) out.failures.push_back(std::move(*failed[qi]));
  }
  return out;
}

}  // namespace roomtrack
