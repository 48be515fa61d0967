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

#include "roomtrack/kdtree.hpp"

#include <algorithm>

#include "roomtrack/error.hpp"

namespace roomtrack {

namespace {
// Max-heap order on (dist2, index): the worst candidate sits at the front.
inline bool heap_less(const Neighbor& a, const Neighbor& b) {
  if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
  return a.index < b.index;
}
}  // namespace

KdTree::KdTree(std::vector<Vec3> points, int leaf_size)
    : pts_(std::move(points)), leaf_size_(std::max(1, leaf_size)) {
  order_.resize(pts_.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  if (!pts_.empty()) {
    nodes_.reserve(2 * pts_.size() / static_cast<std::size_t>(leaf_size_) + 2);
    root_ = build(0, static_cast<std::uint32_t>(pts_.size()));
  }
}

std::uint32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();

  if (end - begin <= static_cast<std::uint32_t>(leaf_size_)) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }

  Vec3 lo = pts_[order_[begin]];
  Vec3 hi = lo;
  for (std::uint32_t i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(pts_[order_[i]]);
    hi = hi.cwiseMax(pts_[order_[i]]);
  }
  int axis = 0;
  const Vec3 extent = hi - lo;
  if (extent.y() > extent[axis]) axis = 1;
  if (extent.z() > extent[axis]) axis = 2;

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = pts_[a][axis];
                     const double cb = pts_[b][axis];
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });

  nodes_[id].axis = axis;
  nodes_[id].split = pts_[order_[mid]][axis];
  const std::uint32_t left = build(begin, mid);
  const std::uint32_t right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(std::uint32_t node_id, const Vec3& q, int k,
                    std::vector<Neighbor>& heap) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::uint32_t idx = order_[i];
      const Neighbor cand{idx, (pts_[idx] - q).squaredNorm()};
      if (heap.size() < static_cast<std::size_t>(k)) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), heap_less);
      } else if (heap_less(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), heap_less);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), heap_less);
      }
    }
    return;
  }

  const double delta = q[node.axis] - node.split;
  const std::uint32_t near = delta <= 0.0 ? node.left : node.right;
  const std::uint32_t far = delta <= 0.0 ? node.right : node.left;
  search(near, q, k, heap);
  // Prune only on a strictly larger plane distance so that equal-distance
  // candidates across the plane are still visited (tie correctness).
  if (heap.size() < static_cast<std::size_t>(k) || !(delta * delta > heap.front().dist2)) {
    search(far, q, k, heap);
  }
}

std::vector<Neighbor> KdTree::knn(const Vec3& q, int k) const {
  if (k < 1) throw Error(Errc::invalid_argument, "knn: k must be >= 1");
  if (pts_.empty()) throw Error(Errc::empty_cloud, "knn on an empty cloud");

  std::vector<Neighbor> heap;
  heap.reserve(static_cast<std::size_t>(k));
  search(root_, q, k, heap);
  std::sort(heap.begin(), heap.end(), heap_less);
  return heap;
}

}  // namespace roomtrack
