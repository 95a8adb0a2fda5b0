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

// Class rebalancing for training partitions: SMOTE oversampling, Tomek-link
// cleaning and their composition.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bushfire/common.hpp"

namespace bushfire {

enum class TomekPolicy { kRemoveMajorityOnly, kRemoveBoth };

std::string_view to_string(TomekPolicy p);
TomekPolicy parse_tomek_policy(std::string_view s);

struct ResampleConfig {
  int k_neighbors = 5;
  double target_ratio = 1.0;  // each non-majority class grows to ceil(ratio * majority)
  TomekPolicy tomek_policy = TomekPolicy::kRemoveMajorityOnly;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

struct Resampled {
  Matrix x;
  Labels y;
};

// Originals are kept verbatim and in order; synthetic rows are appended
// class by class. Each synthetic row is x + u * (x_nn - x) with x_nn drawn
// from the k nearest same-class neighbours of x and u ~ U(0, 1).
Resampled smote(const Matrix& x, const Labels& y, const ResampleConfig& config);

// Mutual nearest-neighbour pairs (i < j) with different labels.
std::vector<std::pair<std::size_t, std::size_t>> tomek_links(const Matrix& x, const Labels& y,
                                                             int threads = 1);

struct ResampleSummary {
  std::vector<std::size_t> before;
  std::vector<std::size_t> after_smote;
  std::vector<std::size_t> after_tomek;
  int tomek_passes = 0;

  std::string to_string(const std::vector<std::string>& class_names) const;
};

// Removes Tomek-link members per policy, repeating until a pass removes
// nothing. `majority` is the class eligible for removal under
// kRemoveMajorityOnly.
Resampled remove_tomek_links(const Matrix& x, const Labels& y, TomekPolicy policy, int majority,
                             int threads = 1, int* passes = nullptr);

Resampled smote_tomek(const Matrix& x, const Labels& y, const ResampleConfig& config,
                      ResampleSummary* summary = nullptr);

}  // namespace bushfire
