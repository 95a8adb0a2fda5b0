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

#include "bushfire/mlp.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "bushfire/random.hpp"

namespace bushfire {

std::string_view to_string(Activation a) { return a == Activation::kTanh ? "tanh" : "relu"; }

Activation parse_activation(std::string_view s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "tanh") return Activation::kTanh;
  throw PreconditionError("unknown activation \"" + std::string(s) + "\" (expected relu or tanh)");
}

void MlpParams::validate() const {
  if (hidden.empty()) throw PreconditionError("mlp: at least one hidden layer is required");
  for (int w : hidden)
    if (w < 1) throw PreconditionError("mlp: hidden layer widths must be >= 1");
  if (!(alpha >= 0.0)) throw PreconditionError("mlp: alpha must be >= 0");
  if (batch_size < 1 || max_epochs < 1) throw PreconditionError("mlp: batch_size and max_epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw PreconditionError("mlp: learning_rate must be > 0");
  if (n_iter_no_change < 1) throw PreconditionError("mlp: n_iter_no_change must be >= 1");
}

Json MlpParams::to_json() const {
  return Json{{"hidden", hidden},           {"activation", std::string(to_string(activation))},
              {"alpha", alpha},             {"batch_size", batch_size},
              {"max_epochs", max_epochs},   {"learning_rate", learning_rate},
              {"tol", tol},                 {"n_iter_no_change", n_iter_no_change},
              {"seed", seed}};
}

MlpParams MlpParams::from_json(const Json& j) {
  MlpParams p;
  p.hidden = j.value("hidden", p.hidden);
  p.activation = parse_activation(j.value("activation", std::string("relu")));
  p.alpha = j.value("alpha", p.alpha);
  p.batch_size = j.value("batch_size", p.batch_size);
  p.max_epochs = j.value("max_epochs", p.max_epochs);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.tol = j.value("tol", p.tol);
  p.n_iter_no_change = j.value("n_iter_no_change", p.n_iter_no_change);
  p.seed = j.value("seed", p.seed);
  return p;
}

std::vector<int> mlp_layer_sizes(int n_inputs, const std::vector<int>& hidden, int n_outputs) {
  std::vector<int> sizes{n_inputs};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(n_outputs);
  return sizes;
}

Eigen::Index mlp_parameter_count(const std::vector<int>& sizes) {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) n += static_cast<Eigen::Index>(sizes[l] + 1) * sizes[l + 1];
  return n;
}

namespace {

struct Layer {
  Eigen::Map<const Matrix> w;
  Eigen::Map<const Eigen::RowVectorXd> b;
};

std::vector<Layer> unpack(const std::vector<int>& sizes, const Vector& theta) {
  std::vector<Layer> layers;
  Eigen::Index off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l], out = sizes[l + 1];
    Eigen::Map<const Matrix> w(theta.data() + off, in, out);
    off += static_cast<Eigen::Index>(in) * out;
    Eigen::Map<const Eigen::RowVectorXd> b(theta.data() + off, out);
    off += out;
    layers.push_back({w, b});
  }
  return layers;
}

void softmax_rows(Matrix& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - m).exp();
    z.row(i) /= z.row(i).sum();
  }
}

void activate(Matrix& z, Activation a) {
  if (a == Activation::kRelu)
    z = z.cwiseMax(0.0);
  else
    z = z.array().tanh();
}

// Returns softmax probabilities; fills `acts` with each layer's input.
Matrix forward(const std::vector<Layer>& layers, Activation a, const Matrix& x, std::vector<Matrix>* acts) {
  Matrix h = x;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (acts) acts->push_back(h);
    Matrix z = (h * layers[l].w).rowwise() + layers[l].b;
    if (l + 1 < layers.size()) activate(z, a);
    h = std::move(z);
  }
  softmax_rows(h);
  return h;
}

}  // namespace

double mlp_loss(const std::vector<int>& sizes, Activation activation, const Vector& theta, const Matrix& x,
                const Labels& y, double alpha, Vector* gradient) {
  const auto layers = unpack(sizes, theta);
  std::vector<Matrix> acts;
  const Matrix p = forward(layers, activation, x, gradient ? &acts : nullptr);
  const auto n = static_cast<double>(x.rows());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    loss -= std::log(std::max(p(i, y[static_cast<std::size_t>(i)]), 1e-300));
  loss /= n;
  double penalty = 0.0;
  for (const auto& l : layers) penalty += l.w.squaredNorm();
  loss += 0.5 * alpha * penalty / n;
  if (!gradient) return loss;

  gradient->resize(theta.size());
  Matrix delta = p;
  for (Eigen::Index i = 0; i < p.rows(); ++i) delta(i, y[static_cast<std::size_t>(i)]) -= 1.0;
  delta /= n;
  // Offsets of each layer's block in the flat vector.
  std::vector<Eigen::Index> offs;
  Eigen::Index off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    offs.push_back(off);
    off += static_cast<Eigen::Index>(sizes[l] + 1) * sizes[l + 1];
  }
  for (std::size_t l = layers.size(); l-- > 0;) {
    const int in = sizes[l], out = sizes[l + 1];
    Eigen::Map<Matrix> gw(gradient->data() + offs[l], in, out);
    Eigen::Map<Eigen::RowVectorXd> gb(gradient->data() + offs[l] + static_cast<Eigen::Index>(in) * out, out);
    gw = acts[l].transpose() * delta + (alpha / n) * layers[l].w;
    gb = delta.colwise().sum();
    if (l == 0) break;
    Matrix back = delta * layers[l].w.transpose();
    const Matrix& h = acts[l];  // activated output of layer l-1
    if (activation == Activation::kRelu)
      back = back.array() * (h.array() > 0.0).cast<double>();
    else
      back = back.array() * (1.0 - h.array().square());
    delta = std::move(back);
  }
  return loss;
}

Mlp Mlp::fit(const Matrix& x, const Labels& y, const MlpParams& params, int n_classes) {
  params.validate();
  if (y.empty()) throw PreconditionError("mlp: empty training data");
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw PreconditionError("mlp: row/label count mismatch");
  if (n_classes <= 0) n_classes = count_classes(y);
  if (n_classes < 2) throw PreconditionError("mlp: need at least two classes");

  Mlp m;
  m.params_ = params;
  m.sizes_ = mlp_layer_sizes(static_cast<int>(x.cols()), params.hidden, n_classes);
  m.theta_.resize(mlp_parameter_count(m.sizes_));

  Rng rng(derive_seed(params.seed, 0x3Au));
  Eigen::Index off = 0;
  for (std::size_t l = 0; l + 1 < m.sizes_.size(); ++l) {
    const int in = m.sizes_[l], out = m.sizes_[l + 1];
    const double limit = std::sqrt(6.0 / (in + out));
    const Eigen::Index count = static_cast<Eigen::Index>(in + 1) * out;
    for (Eigen::Index k = 0; k < count; ++k) m.theta_(off + k) = rng.uniform(-limit, limit);
    off += count;
  }

  // Adam.
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  Vector mom = Vector::Zero(m.theta_.size()), vel = Vector::Zero(m.theta_.size()), grad;
  std::vector<std::size_t> order(y.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(params.batch_size);
  double best = std::numeric_limits<double>::infinity();
  int stale = 0;
  long step = 0;
  bool stopped = false;
  for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const Indices rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
      const Matrix xb = take_rows(x, rows);
      const Labels yb = take(y, rows);
      const double loss = mlp_loss(m.sizes_, params.activation, m.theta_, xb, yb, params.alpha, &grad);
      epoch_loss += loss * static_cast<double>(end - start);
      ++step;
      mom = beta1 * mom + (1.0 - beta1) * grad;
      vel = beta2 * vel + (1.0 - beta2) * grad.cwiseProduct(grad);
      const double lr = params.learning_rate * std::sqrt(1.0 - std::pow(beta2, static_cast<double>(step))) /
                        (1.0 - std::pow(beta1, static_cast<double>(step)));
      m.theta_.array() -= lr * mom.array() / (vel.array().sqrt() + eps);
    }
    epoch_loss /= static_cast<double>(order.size());
    m.loss_history_.push_back(epoch_loss);
    if (epoch_loss > best - params.tol) {
      if (++stale >= params.n_iter_no_change) {
        stopped = true;
        break;
      }
    } else {
      stale = 0;
    }
    best = std::min(best, epoch_loss);
  }
  if (!stopped)
    m.warnings_.push_back("mlp: training loss still improving after " + std::to_string(params.max_epochs) +
                          " epochs");
  return m;
}

Matrix Mlp::predict_proba(const Matrix& x) const {
  return forward(unpack(sizes_, theta_), params_.activation, x, nullptr);
}

Json Mlp::parameters() const {
  return Json{{"sizes", sizes_}, {"theta", to_json(theta_)}, {"loss_history", loss_history_}};
}

std::shared_ptr<Mlp> Mlp::from_json(const Json& hyper, const Json& params) {
  auto m = std::make_shared<Mlp>();
  m->params_ = MlpParams::from_json(hyper);
  m->sizes_ = params.at("sizes").get<std::vector<int>>();
  m->theta_ = vector_from_json(params.at("theta"));
  if (m->theta_.size() != mlp_parameter_count(m->sizes_)) throw SchemaError("mlp: parameter count mismatch");
  m->loss_history_ = params.value("loss_history", std::vector<double>{});
  return m;
}

}  // namespace bushfire
