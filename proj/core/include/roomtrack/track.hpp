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

#include <string>
#include <vector>

#include "roomtrack/fusion.hpp"
#include "roomtrack/geometry.hpp"

namespace roomtrack {

struct Query {
  int id = 0;
  int t_q = 0;          // first observation frame
  Vec3 p_q = Vec3::Zero();  // metric room frame
};

struct TrackerConfig {
  int k = 32;               // neighborhood size
  double sigma_s = 0.05;    // spatial kernel width, meters
  double sigma_f = 0.3;     // feature kernel width
  int refine_iterations = 4;
  double tau_v = 0.5;       // visibility threshold
  double alpha = 0.1;       // reference-feature blend while visible

  void validate() const;
};

struct TrackState {
  Vec3 position = Vec3::Zero();
  FeatureDescriptor f_ref = FeatureDescriptor::Zero();
  Vec3 velocity = Vec3::Zero();
  int last_visible = -1;
};

struct Track {
  int query_id = 0;
  int t0 = 0;  // first frame with an entry
  std::vector<Vec3> positions;
  std::vector<double> visibility;  // in [0, 1]
};

struct TrackSet {
  std::vector<Track> tracks;
  struct Failure {
    int query_id = 0;
    std::string reason;
  };
  std::vector<Failure> failures;
};

// Anchors the state at the query position; the reference feature is the
// distance-weighted mean of the K nearest features. Throws isolated-query
// when no cloud point lies within 3 sigma_s of the query.
TrackState init_track(const Query& q, const IndexedCloud& cloud, const TrackerConfig& cfg);

struct StepResult {
  Vec3 position = Vec3::Zero();
  double visibility = 0.0;
};

// One frame advance: constant-velocity prediction, R rounds of
// feature-weighted mean refinement, visibility from the best
// feature-similar neighbor in geometric support, coasting when not
// visible. An empty cloud coasts with zero visibility.
StepResult step(TrackState& state, const IndexedCloud& cloud, const TrackerConfig& cfg);

// Runs every query independently over clouds[t] for t in [t_q, T).
// clouds[i] must correspond to frame index i. Isolated queries are
// reported in failures; the rest are tracked.
TrackSet track(const std::vector<IndexedCloud>& clouds, const std::vector<Query>& queries,
               const TrackerConfig& cfg);

}  // namespace roomtrack
