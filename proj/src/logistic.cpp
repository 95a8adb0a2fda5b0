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

#include "bushfire/logistic.hpp"

#include <cmath>

namespace bushfire {

Json LogisticParams::to_json() const { return Json{{"l2", l2}, {"max_iter", max_iter}, {"tol", tol}}; }

LogisticParams LogisticParams::from_json(const Json& j) {
  LogisticParams p;
  p.l2 = j.value("l2", p.l2);
  p.max_iter = j.value("max_iter", p.max_iter);
  p.tol = j.value("tol", p.tol);
  return p;
}

namespace {

double sigmoid(double s) {
  if (s >= 0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double softplus(double s) { return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

}  // namespace

double logistic_objective(const Matrix& x, const Vector& target, const Vector& theta, double l2,
                          Vector* gradient) {
  const auto n = static_cast<double>(x.rows());
  const auto w = theta.tail(theta.size() - 1);
  const Vector s = (x * w).array() + theta(0);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) loss += softplus(s(i)) - target(i) * s(i);
  loss = loss / n + 0.5 * l2 * w.squaredNorm();
  if (gradient) {
    Vector r(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) r(i) = sigmoid(s(i)) - target(i);
    gradient->resize(theta.size());
    (*gradient)(0) = r.sum() / n;
    gradient->tail(theta.size() - 1) = x.transpose() * r / n + l2 * w;
  }
  return loss;
}

namespace {

struct BinaryFit {
  Vector theta;
  int iterations;
  bool converged;
};

BinaryFit fit_binary(const Matrix& x, const Vector& t, const LogisticParams& p) {
  Vector theta = Vector::Zero(x.cols() + 1);
  Vector grad;
  double f = logistic_objective(x, t, theta, p.l2, &grad);
  double step = 1.0;
  Vector prev_theta, prev_grad;
  for (int it = 0; it < p.max_iter; ++it) {
    if (grad.lpNorm<Eigen::Infinity>() < p.tol) return {theta, it, true};
    // Barzilai-Borwein initial step, then Armijo backtracking.
    if (it > 0) {
      const Vector ds = theta - prev_theta, dg = grad - prev_grad;
      const double denom = ds.dot(dg);
      step = denom > 0.0 ? ds.squaredNorm() / denom : 1.0;
    }
    const double gg = grad.squaredNorm();
    Vector candidate, cand_grad;
    double fc = 0.0;
    for (int k = 0; k < 60; ++k) {
      candidate = theta - step * grad;
      fc = logistic_objective(x, t, candidate, p.l2, &cand_grad);
      if (fc <= f - 1e-4 * step * gg) break;
      step *= 0.5;
    }
    if (!(fc <= f)) return {theta, it, false};  // no further progress possible
    prev_theta = theta;
    prev_grad = grad;
    theta = candidate;
    grad = cand_grad;
    f = fc;
  }
  return {theta, p.max_iter, grad.lpNorm<Eigen::Infinity>() < p.tol};
}

}  // namespace

LogisticRegression LogisticRegression::fit(const Matrix& x, const Labels& y, const LogisticParams& params,
                                           int n_classes) {
  if (y.empty()) throw PreconditionError("logistic: empty training data");
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw PreconditionError("logistic: row/label count mismatch");
  if (!(params.l2 >= 0.0) || params.max_iter < 1 || !(params.tol > 0.0))
    throw PreconditionError("logistic: invalid parameters");
  if (n_classes <= 0) n_classes = count_classes(y);
  if (n_classes < 2) throw PreconditionError("logistic: need at least two classes");
  LogisticRegression m;
  m.params_ = params;
  m.n_classes_ = n_classes;
  const int n_out = n_classes == 2 ? 1 : n_classes;
  m.coef_.resize(n_out, x.cols() + 1);
  for (int k = 0; k < n_out; ++k) {
    const int positive = n_out == 1 ? 1 : k;
    Vector t(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) t(i) = y[static_cast<std::size_t>(i)] == positive ? 1.0 : 0.0;
    const BinaryFit fit = fit_binary(x, t, params);
    m.coef_.row(k) = fit.theta.transpose();
    m.iterations_.push_back(fit.iterations);
    if (!fit.converged)
      m.warnings_.push_back("logistic: output " + std::to_string(k) + " did not converge within " +
                            std::to_string(params.max_iter) + " iterations");
  }
  return m;
}

Matrix LogisticRegression::predict_proba(const Matrix& x) const {
  const Matrix s = (x * coef_.rightCols(coef_.cols() - 1).transpose()).rowwise() + coef_.col(0).transpose();
  Matrix p(x.rows(), n_classes_);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (n_classes_ == 2) {
      p(i, 1) = sigmoid(s(i, 0));
      p(i, 0) = 1.0 - p(i, 1);
      continue;
    }
    double total = 0.0;
    for (Eigen::Index k = 0; k < n_classes_; ++k) total += p(i, k) = sigmoid(s(i, k));
    p.row(i) /= total;
  }
  return p;
}

Json LogisticRegression::parameters() const {
  return Json{{"n_classes", n_classes_}, {"coef", to_json(coef_)}, {"iterations", iterations_}};
}

std::shared_ptr<LogisticRegression> LogisticRegression::from_json(const Json& hyper, const Json& params) {
  auto m = std::make_shared<LogisticRegression>();
  m->params_ = LogisticParams::from_json(hyper);
  m->n_classes_ = params.at("n_classes").get<int>();
  m->coef_ = matrix_from_json(params.at("coef"));
  m->iterations_ = params.value("iterations", std::vector<int>{});
  return m;
}

}  // namespace bushfire
