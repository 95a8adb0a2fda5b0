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

// CART classification trees (Gini) and bagged random forests.

#pragma once

#include <span>
#include <vector>

#include "bushfire/model.hpp"
#include "bushfire/random.hpp"

namespace bushfire {

enum class ClassWeight { kNone, kBalanced };

// Per-class weights; kBalanced gives n / (k * count_c).
std::vector<double> class_weights(const Labels& y, int n_classes, ClassWeight mode);

struct TreeParams {
  int max_depth = -1;  // -1: unlimited; 0: a single leaf
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  int max_features = 0;  // features tried per split; 0 means all
  ClassWeight class_weight = ClassWeight::kNone;

  Json to_json() const;
  static TreeParams from_json(const Json& j);
};

struct GiniSplit {
  int feature = -1;  // -1: no admissible split
  double threshold = 0.0;
  double gain = 0.0;  // impurity(parent) - weighted mean impurity(children)
};

// Best Gini split of `rows` over `features`. Thresholds are midpoints between
// consecutive distinct values; a sample goes left when value <= threshold.
// Ties resolve to the earliest feature in `features`, then the lowest
// threshold.
GiniSplit best_gini_split(const Matrix& x, const Labels& y, std::span<const double> row_weight,
                          std::span<const std::size_t> rows, std::span<const int> features,
                          int n_classes, int min_samples_leaf);

double gini_impurity(std::span<const double> class_weight_sums);

// Midpoint that still separates a < b after rounding.
double split_midpoint(double a, double b);

class DecisionTree final : public Classifier {
 public:
  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> value;  // class distribution at leaves
  };

  DecisionTree() = default;

  static DecisionTree fit(const Matrix& x, const Labels& y, const TreeParams& params,
                          int n_classes = 0);
  // Fit on a row multiset (bootstrap) with explicit per-row weights.
  // `rng` drives per-split feature subsampling when max_features > 0.
  static DecisionTree fit_rows(const Matrix& x, const Labels& y, std::span<const std::size_t> rows,
                               std::span<const double> row_weight, const TreeParams& params,
                               int n_classes, Rng* rng);

  std::string family() const override { return "tree"; }
  int n_classes() const override { return n_classes_; }
  Matrix predict_proba(const Matrix& x) const override;
  Json hyperparameters() const override { return params_.to_json(); }
  Json parameters() const override;
  static std::shared_ptr<DecisionTree> from_json(const Json& hyper, const Json& params);

  const std::vector<double>& leaf_distribution(const double* row, Eigen::Index stride) const;
  const std::vector<Node>& nodes() const { return nodes_; }
  int depth() const;

 private:
  TreeParams params_;
  int n_classes_ = 0;
  std::vector<Node> nodes_;
};

struct ForestParams {
  int n_trees = 100;
  TreeParams tree{};
  std::string max_features = "sqrt";  // "sqrt", "all", "log2" or an integer
  bool bootstrap = true;
  std::uint64_t seed = 0;
  int threads = 1;

  Json to_json() const;
  static ForestParams from_json(const Json& j);
};

int resolve_max_features(const std::string& spec, int n_features);

class RandomForest final : public Classifier {
 public:
  RandomForest() = default;

  static RandomForest fit(const Matrix& x, const Labels& y, const ForestParams& params,
                          int n_classes = 0);

  std::string family() const override { return "forest"; }
  int n_classes() const override { return n_classes_; }
  Matrix predict_proba(const Matrix& x) const override;
  Json hyperparameters() const override;
  Json parameters() const override;
  static std::shared_ptr<RandomForest> from_json(const Json& hyper, const Json& params);

  const std::vector<DecisionTree>& trees() const { return trees_; }

 private:
  ForestParams params_;
  int n_classes_ = 0;
  std::vector<DecisionTree> trees_;
};

}  // namespace bushfire
