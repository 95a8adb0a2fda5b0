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

// Feedforward network with a softmax output, trained with Adam on
// mini-batches.

#pragma once

#include <cstdint>
#include <vector>

#include "bushfire/model.hpp"

namespace bushfire {

enum class Activation { kRelu, kTanh };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view s);

struct MlpParams {
  std::vector<int> hidden = {100, 100, 50};
  Activation activation = Activation::kRelu;
  double alpha = 1e-4;  // L2 penalty: alpha / (2 * batch) * sum |W|^2
  int batch_size = 200;
  int max_epochs = 200;
  double learning_rate = 1e-3;
  double tol = 1e-4;
  int n_iter_no_change = 10;
  std::uint64_t seed = 0;

  void validate() const;
  Json to_json() const;
  static MlpParams from_json(const Json& j);
};

// Layer widths from input to output, e.g. {d, 100, 100, 50, k}.
std::vector<int> mlp_layer_sizes(int n_inputs, const std::vector<int>& hidden, int n_outputs);

// Number of parameters; the flat layout is W_0 (column-major, in x out),
// b_0, W_1, b_1, ...
Eigen::Index mlp_parameter_count(const std::vector<int>& sizes);

// Mean cross-entropy plus L2 penalty over (x, y) and, optionally, its
// gradient with respect to the flat parameter vector.
double mlp_loss(const std::vector<int>& sizes, Activation activation, const Vector& theta, const Matrix& x,
                const Labels& y, double alpha, Vector* gradient = nullptr);

class Mlp final : public Classifier {
 public:
  Mlp() = default;

  static Mlp fit(const Matrix& x, const Labels& y, const MlpParams& params, int n_classes = 0);

  std::string family() const override { return "mlp"; }
  int n_classes() const override { return sizes_.empty() ? 0 : sizes_.back(); }
  Matrix predict_proba(const Matrix& x) const override;
  Json hyperparameters() const override { return params_.to_json(); }
  Json parameters() const override;
  std::vector<std::string> warnings() const override { return warnings_; }
  static std::shared_ptr<Mlp> from_json(const Json& hyper, const Json& params);

  const std::vector<double>& loss_history() const { return loss_history_; }
  const Vector& theta() const { return theta_; }

 private:
  MlpParams params_;
  std::vector<int> sizes_;
  Vector theta_;
  std::vector<double> loss_history_;
  std::vector<std::string> warnings_;
};

}  // namespace bushfire
