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

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bushfire/common.hpp"

namespace bushfire {

// Exact Euclidean k-nearest-neighbour search. Results are ordered by
// (squared distance, row index), so equal-distance ties resolve to the lower
// index exactly as a linear scan would.
class KdTree {
 public:
  using Hit = std::pair<double, std::size_t>;  // squared distance, row

  explicit KdTree(const Matrix& points, std::size_t leaf_size = 16);

  std::vector<Hit> knn(const double* query, std::size_t k,
                       std::optional<std::size_t> exclude = std::nullopt) const;
  std::vector<Hit> knn_of_row(std::size_t row, std::size_t k) const {
    return knn(data_.row(static_cast<Eigen::Index>(row)).data(), k, row);
  }

  std::size_t size() const { return static_cast<std::size_t>(data_.rows()); }
  std::size_t dims() const { return static_cast<std::size_t>(data_.cols()); }

 private:
  struct Node {
    std::size_t begin, end;  // range in order_
    int dim = -1;            // -1 for a leaf
    double split = 0.0;
    std::size_t left = 0, right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end);
  void search(std::size_t node, const double* q, std::size_t k, std::optional<std::size_t> exclude,
              std::vector<Hit>& heap) const;
  double squared_distance(const double* q, std::size_t row) const;

  RowMatrix data_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_;
};

}  // namespace bushfire
