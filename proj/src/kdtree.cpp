/*
 * Copyright 2026 The Bushfire Risk Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bushfire/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace bushfire {

KdTree::KdTree(const Matrix& points, std::size_t leaf_size)
    : data_(points), order_(static_cast<std::size_t>(points.rows())), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  std::iota(order_.begin(), order_.end(), 0);
  if (!order_.empty()) {
    nodes_.reserve(2 * order_.size() / leaf_size_ + 2);
    build(0, order_.size());
  }
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
  const std::size_t id = nodes_.size();
  nodes_.push_back({begin, end});
  if (end - begin <= leaf_size_ || data_.cols() == 0) return id;

  // Split on the widest dimension at the median.
  int best_dim = -1;
  double best_spread = 0.0;
  for (Eigen::Index d = 0; d < data_.cols(); ++d) {
    double lo = data_(static_cast<Eigen::Index>(order_[begin]), d), hi = lo;
    for (std::size_t i = begin + 1; i < end; ++i) {
      const double v = data_(static_cast<Eigen::Index>(order_[i]), d);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = static_cast<int>(d);
    }
  }
  if (best_dim < 0) return id;  // all points identical

  const std::size_t mid = begin + (end - begin) / 2;
  auto first = order_.begin() + static_cast<std::ptrdiff_t>(begin);
  auto nth = order_.begin() + static_cast<std::ptrdiff_t>(mid);
  auto last = order_.begin() + static_cast<std::ptrdiff_t>(end);
  std::nth_element(first, nth, last, [&](std::size_t a, std::size_t b) {
    return data_(static_cast<Eigen::Index>(a), best_dim) < data_(static_cast<Eigen::Index>(b), best_dim);
  });
  const double split = data_(static_cast<Eigen::Index>(order_[mid]), best_dim);

  nodes_[id].dim = best_dim;
  nodes_[id].split = split;
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double KdTree::squared_distance(const double* q, std::size_t row) const {
  const double* p = data_.row(static_cast<Eigen::Index>(row)).data();
  double s = 0.0;
  for (Eigen::Index d = 0; d < data_.cols(); ++d) {
    const double diff = q[d] - p[d];
    s += diff * diff;
  }
  return s;
}

void KdTree::search(std::size_t node_id, const double* q, std::size_t k,
                    std::optional<std::size_t> exclude, std::vector<Hit>& heap) const {
  const Node& node = nodes_[node_id];
  if (node.dim < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const std::size_t row = order_[i];
      if (exclude && row == *exclude) continue;
      const Hit hit{squared_distance(q, row), row};
      if (heap.size() < k) {
        heap.push_back(hit);
        std::push_heap(heap.begin(), heap.end());
      } else if (hit < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = hit;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    return;
  }
  // Points left of the median satisfy v <= split, right ones v >= split.
  const double diff = q[node.dim] - node.split;
  const std::size_t near = diff <= 0.0 ? node.left : node.right;
  const std::size_t far = diff <= 0.0 ? node.right : node.left;
  search(near, q, k, exclude, heap);
  // Non-strict: equal-distance candidates stay reachable for the index
  // tie-break.
  if (heap.size() < k || diff * diff <= heap.front().first) search(far, q, k, exclude, heap);
}

std::vector<KdTree::Hit> KdTree::knn(const double* query, std::size_t k,
                                     std::optional<std::size_t> exclude) const {
  std::vector<Hit> heap;
  if (k == 0 || nodes_.empty()) return heap;
  heap.reserve(k + 1);
  search(0, query, k, exclude, heap);
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

}  // namespace bushfire
