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

#include "roomtrack/features.hpp"

#include <algorithm>
#include <cmath>

#include "roomtrack/error.hpp"
#include "roomtrack/parallel.hpp"

namespace roomtrack {

namespace {

constexpr int kPatchRadius = 3;  // 7x7 patch

inline int clamp_index(int v, int hi) { return std::clamp(v, 0, hi - 1); }

inline double gray_at(const RgbImage& img, int row, int col) {
  const int r = clamp_index(row, img.height);
  const int c = clamp_index(col, img.width);
  return (static_cast<double>(img.at(r, c, 0)) + img.at(r, c, 1) + img.at(r, c, 2)) /
         (3.0 * 255.0);
}

// Octant of a nonzero gradient by sign/magnitude comparisons only, so that
// bin(-g) == (bin(g) + 4) % 8 holds exactly, boundaries included.
inline int orientation_bin(double gx, double gy) {
  const double ax = std::abs(gx);
  const double ay = std::abs(gy);
  if (gx > 0.0 && gy >= 0.0) return ay < ax ? 0 : 1;
  if (gx <= 0.0 && gy > 0.0) return ax < ay ? 2 : 3;
  if (gx < 0.0 && gy <= 0.0) return ay < ax ? 4 : 5;
  return ax < ay ? 6 : 7;  // gx >= 0, gy < 0
}

// Ring index from the squared patch offset; bands split at radii
// 0.5, 1.5, 2.5, 3.5 (squared: 0.25, 2.25, 6.25, 12.25).
inline int ring_index(int dr, int dc) {
  const int rho2 = dr * dr + dc * dc;
  if (rho2 == 0) return 0;
  if (rho2 <= 2) return 1;
  if (rho2 <= 6) return 2;
  if (rho2 <= 12) return 3;
  return 4;
}

}  // namespace

FeatureDescriptor descriptor_at(const RgbImage& img, int row, int col) {
  double chan_sum[3] = {0.0, 0.0, 0.0};
  double gray_sum = 0.0;
  double hist[8] = {};
  double ring_sum[5] = {};
  int ring_count[5] = {};

  for (int dr = -kPatchRadius; dr <= kPatchRadius; ++dr) {
    for (int dc = -kPatchRadius; dc <= kPatchRadius; ++dc) {
      const int r = clamp_index(row + dr, img.height);
      const int c = clamp_index(col + dc, img.width);
      const double g = gray_at(img, r, c);
      for (int ch = 0; ch < 3; ++ch) {
        chan_sum[ch] += static_cast<double>(img.at(r, c, ch)) / 255.0;
      }
      gray_sum += g;

      const double gx = 0.5 * (gray_at(img, r, c + 1) - gray_at(img, r, c - 1));
      const double gy = 0.5 * (gray_at(img, r + 1, c) - gray_at(img, r - 1, c));
      const double mag = std::sqrt(gx * gx + gy * gy);
      if (mag > 0.0) hist[orientation_bin(gx, gy)] += mag;

      const int ring = ring_index(dr, dc);
      ring_sum[ring] += g;
      ring_count[ring] += 1;
    }
  }

  constexpr double kPatchArea = 49.0;
  const double gray_mean = gray_sum / kPatchArea;

  double d[kFeatureDim];
  for (int ch = 0; ch < 3; ++ch) d[ch] = chan_sum[ch] / kPatchArea - gray_mean;
  for (int b = 0; b < 8; ++b) d[3 + b] = hist[b] / kPatchArea;
  for (int ring = 0; ring < 5; ++ring) {
    d[11 + ring] = ring_sum[ring] / ring_count[ring] - gray_mean;
  }

  double norm2 = 0.0;
  for (double v : d) norm2 += v * v;
  const double norm = std::sqrt(norm2);

  FeatureDescriptor out;
  if (norm < 1e-12) {
    out.setConstant(0.25f);  // uniform unit vector, 1/sqrt(16)
    return out;
  }
  for (int i = 0; i < kFeatureDim; ++i) {
    out[i] = static_cast<float>(d[i] / norm);
  }
  return out;
}

FeatureMap extract_features(const RgbImage& img) {
  if (img.width <= 0 || img.height <= 0) {
    throw Error(Errc::invalid_argument, "extract_features: empty image");
  }
  FeatureMap map;
  map.width = img.width;
  map.height = img.height;
  map.data.resize(static_cast<std::size_t>(img.width) * img.height);
  parallel_ranges(static_cast<std::size_t>(img.height), 8,
                  [&](std::size_t begin, std::size_t end) {
    for (std::size_t row = begin; row < end; ++row) {
      for (int col = 0; col < img.width; ++col) {
        map.data[row * img.width + col] =
            descriptor_at(img, static_cast<int>(row), col);
      }
    }
  });
  return map;
}

}  // namespace roomtrack
