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

#include "bushfire/model.hpp"

namespace bushfire {

struct LogisticParams {
  double l2 = 1e-4;
  int max_iter = 1000;
  double tol = 1e-6;

  Json to_json() const;
  static LogisticParams from_json(const Json& j);
};

// Objective for one binary problem, theta = [intercept, w...]:
//   J = mean_i(log(1 + e^{s_i}) - t_i s_i) + l2/2 * |w|^2,  s_i = b + x_i.w
// The intercept is not penalized.
double logistic_objective(const Matrix& x, const Vector& target, const Vector& theta, double l2,
                          Vector* gradient = nullptr);

// Binary or one-vs-rest L2 logistic regression, fit by gradient descent with
// a backtracking (Armijo) line search.
class LogisticRegression final : public Classifier {
 public:
  LogisticRegression() = default;

  static LogisticRegression fit(const Matrix& x, const Labels& y, const LogisticParams& params,
                                int n_classes = 0);

  std::string family() const override { return "logistic"; }
  int n_classes() const override { return n_classes_; }
  Matrix predict_proba(const Matrix& x) const override;
  Json hyperparameters() const override { return params_.to_json(); }
  Json parameters() const override;
  std::vector<std::string> warnings() const override { return warnings_; }
  static std::shared_ptr<LogisticRegression> from_json(const Json& hyper, const Json& params);

  // Row k holds [intercept, weights] of output k.
  const Matrix& coefficients() const { return coef_; }
  const std::vector<int>& iterations() const { return iterations_; }

 private:
  LogisticParams params_;
  int n_classes_ = 0;
  Matrix coef_;
  std::vector<int> iterations_;
  std::vector<std::string> warnings_;
};

}  // namespace bushfire
