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

namespace roomtrack {

struct Neighbor {
  std::size_t index = 0;  // index into the point list the tree was built on
  double dist2 = 0.0;     // squared Euclidean distance
};

// Balanced kd-tree. Median split on the widest bounding-box axis with an
// (coordinate, index) tie-break, so construction is deterministic. Queries
// return exactly what a linear scan would: ascending distance, ties broken
// by ascending index.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::vector<Vec3> points, int leaf_size = 16);

  std::size_t size() const { return pts_.size(); }
  const Vec3& point(std::size_t i) const { return pts_[i]; }

  // min(k, size()) nearest neighbors. Throws empty-cloud when the tree is
  // empty and invalid-argument when k < 1.
  std::vector<Neighbor> knn(const Vec3& q, int k) const;

 private:
  struct Node {
    int axis = -1;        // -1 marks a leaf
    double split = 0.0;   // splitting coordinate
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t begin = 0;  // leaf range into order_
    std::uint32_t end = 0;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::uint32_t node, const Vec3& q, int k,
              std::vector<Neighbor>& heap) const;

  std::vector<Vec3> pts_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::uint32_t root_ = 0;
  int leaf_size_ = 16;
};

}  // namespace roomtrack
