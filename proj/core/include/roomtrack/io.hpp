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
#include "roomtrack/image.hpp"
#include "roomtrack/metrics.hpp"
#include "roomtrack/rectify.hpp"
#include "roomtrack/synthetic.hpp"
#include "roomtrack/track.hpp"

namespace roomtrack {

// Binary depth: magic "ORGD", u32 width, u32 height, then width*height
// little-endian f32 meters, row-major.
DepthMap load_depth(const std::string& path);
void save_depth(const std::string& path, const DepthMap& depth);

// Binary PPM (P6, maxval 255).
RgbImage load_ppm(const std::string& path);
void save_ppm(const std::string& path, const RgbImage& img);

// Binary cloud dump: magic "ORPC", u32 count, then per point 3x f32
// position, 16x f32 feature, u16 view, u16 row, u16 col (little-endian).
void save_cloud(const std::string& path, const FusedCloud& cloud);
FusedCloud load_cloud(const std::string& path);

// Structured text documents (JSON; doubles printed with 17 significant
// digits so values round-trip losslessly).
void save_calibration(const std::string& path, const RigCalibration& rig);
RigCalibration load_calibration(const std::string& path);

void save_queries(const std::string& path, const std::vector<Query>& queries);
std::vector<Query> load_queries(const std::string& path);

void save_gt_tracks(const std::string& path, const std::vector<GtTrack>& gt);
std::vector<GtTrack> load_gt_tracks(const std::string& path);

void save_tracks(const std::string& path, const TrackSet& tracks);
TrackSet load_tracks(const std::string& path);
// Flat per-(track, frame) records: id, t, x, y, z, visibility.
void save_tracks_tsv(const std::string& path, const TrackSet& tracks);

// Rig, depth corrections, and flags (rectified per-frame depth maps are
// reconstructed from the corrections and are not stored).
void save_rectified(const std::string& path, const RectifiedGeometry& geom);
RectifiedGeometry load_rectified(const std::string& path);

// Sequence directory layout:
//   sequence.json          views, frames, per-view resolution
//   calibration.json       rig
//   rgb/vVV_tTTTT.ppm      color frames
//   depth/vVV_tTTTT.orgd   depth frames
//   queries.json           optional
//   gt_tracks.json         optional
void save_sequence(const std::string& dir, const Sequence& seq);
Sequence load_sequence(const std::string& dir);

// Structured metric report documents.
void save_track_report(const std::string& path, const TrackEval& aggregate,
                       const std::vector<TrackEval>& per_track);
void save_depth_report(const std::string& path, const DepthEval& eval);
void save_consistency_report(const std::string& path, const ConsistencyEval& eval);

}  // namespace roomtrack
