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

// Histogram gradient-boosted trees with logistic loss. Multiclass problems
// are boosted one-vs-rest.

#pragma once

#include <cstdint>
#include <vector>

#include "bushfire/model.hpp"

namespace bushfire {

enum class Growth { kDepthWise, kLeafWise };

std::string_view to_string(Growth g);
Growth parse_growth(std::string_view s);

struct GbdtParams {
  Growth growth = Growth::kLeafWise;
  int n_estimators = 100;
  double learning_rate = 0.1;  // 0 leaves every score at the prior
  int max_depth = 6;           // depth-wise limit; -1 disables it for leaf-wise
  int max_leaves = 31;         // leaf-wise only
  double l2_lambda = 1.0;
  int n_bins = 255;
  int min_samples_leaf = 20;
  double min_child_weight = 1e-3;
  double scale_pos_weight = 1.0;  // binary only
  int early_stopping_rounds = 0;  // 0: off; needs a validation set
  int threads = 1;

  void validate() const;
  Json to_json() const;
  static GbdtParams from_json(const Json& j);
};

// Per-feature bin edges. A value v falls in bin b = #{edges < v}, so the
// split "bin <= b" is the same as "v <= edges[b]". Features with at most
// n_bins distinct values get one bin per value.
struct BinMapper {
  std::vector<std::vector<double>> edges;

  static BinMapper fit(const Matrix& x, int n_bins);
  int bins(int feature) const { return static_cast<int>(edges[static_cast<std::size_t>(feature)].size()) + 1; }
  std::uint16_t bin(int feature, double v) const;
};

class Gbdt final : public Classifier {
 public:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // learning-rate-scaled leaf output
  };
  using Tree = std::vector<Node>;

  Gbdt() = default;

  // `x_val`/`y_val` are only used for the validation loss history and early
  // stopping.
  static Gbdt fit(const Matrix& x, const Labels& y, const GbdtParams& params, int n_classes = 0,
                  const Matrix* x_val = nullptr, const Labels* y_val = nullptr);

  std::string family() const override { return "gbdt"; }
  int n_classes() const override { return n_classes_; }
  Matrix predict_proba(const Matrix& x) const override;
  Json hyperparameters() const override { return params_.to_json(); }
  Json parameters() const override;
  static std::shared_ptr<Gbdt> from_json(const Json& hyper, const Json& params);

  // One column for binary models, one per class otherwise.
  Matrix raw_score(const Matrix& x) const;
  const std::vector<double>& prior() const { return prior_; }
  // trees()[k][r]: tree of output k at round r.
  const std::vector<std::vector<Tree>>& trees() const { return trees_; }
  const std::vector<double>& train_loss() const { return train_loss_; }
  const std::vector<double>& valid_loss() const { return valid_loss_; }

 private:
  GbdtParams params_;
  int n_classes_ = 0;
  std::vector<double> prior_;
  std::vector<std::vector<Tree>> trees_;
  std::vector<double> train_loss_;
  std::vector<double> valid_loss_;
};

// Weighted mean logistic loss of raw scores against 0/1 targets.
double logistic_loss(std::span<const double> score, std::span<const double> target,
                     std::span<const double> weight);

}  // namespace bushfire
