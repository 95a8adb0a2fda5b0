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

#include "bushfire/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bushfire/parallel.hpp"
#include "bushfire/text.hpp"

namespace bushfire {

std::vector<double> class_weights(const Labels& y, int n_classes, ClassWeight mode) {
  std::vector<double> w(static_cast<std::size_t>(n_classes), 1.0);
  if (mode == ClassWeight::kNone) return w;
  const auto counts = class_counts(y, n_classes);
  const auto present = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
  for (int c = 0; c < n_classes; ++c) {
    const auto n_c = counts[static_cast<std::size_t>(c)];
    w[static_cast<std::size_t>(c)] =
        n_c ? static_cast<double>(y.size()) / (static_cast<double>(present) * static_cast<double>(n_c)) : 0.0;
  }
  return w;
}

namespace {

std::string_view class_weight_name(ClassWeight cw) { return cw == ClassWeight::kBalanced ? "balanced" : "none"; }

ClassWeight parse_class_weight(std::string_view s) {
  if (s == "balanced") return ClassWeight::kBalanced;
  if (s == "none") return ClassWeight::kNone;
  throw PreconditionError("unknown class_weight \"" + std::string(s) + "\"");
}

}  // namespace

Json TreeParams::to_json() const {
  return Json{{"max_depth", max_depth},
              {"min_samples_split", min_samples_split},
              {"min_samples_leaf", min_samples_leaf},
              {"max_features", max_features},
              {"class_weight", std::string(class_weight_name(class_weight))}};
}

TreeParams TreeParams::from_json(const Json& j) {
  TreeParams p;
  p.max_depth = j.value("max_depth", p.max_depth);
  p.min_samples_split = j.value("min_samples_split", p.min_samples_split);
  p.min_samples_leaf = j.value("min_samples_leaf", p.min_samples_leaf);
  p.max_features = j.value("max_features", p.max_features);
  p.class_weight = parse_class_weight(j.value("class_weight", std::string("none")));
  return p;
}

double gini_impurity(std::span<const double> sums) {
  double total = 0.0;
  for (double s : sums) total += s;
  if (!(total > 0.0)) return 0.0;
  double sq = 0.0;
  for (double s : sums) sq += (s / total) * (s / total);
  return 1.0 - sq;
}

double split_midpoint(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return (mid >= b || mid < a) ? a : mid;
}

GiniSplit best_gini_split(const Matrix& x, const Labels& y, std::span<const double> row_weight,
                          std::span<const std::size_t> rows, std::span<const int> features,
                          int n_classes, int min_samples_leaf) {
  GiniSplit best;
  const std::size_t n = rows.size();
  const auto min_leaf = static_cast<std::size_t>(std::max(min_samples_leaf, 1));
  if (n < 2 * min_leaf) return best;

  const auto k = static_cast<std::size_t>(n_classes);
  std::vector<double> total(k, 0.0), left(k), right(k);
  double w_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total[static_cast<std::size_t>(y[rows[i]])] += row_weight[i];
    w_total += row_weight[i];
  }
  if (!(w_total > 0.0)) return best;
  const double parent = gini_impurity(total);

  std::vector<std::pair<double, std::size_t>> sorted(n);
  for (int f : features) {
    for (std::size_t i = 0; i < n; ++i)
      sorted[i] = {x(static_cast<Eigen::Index>(rows[i]), f), i};
    std::sort(sorted.begin(), sorted.end());
    std::fill(left.begin(), left.end(), 0.0);
    double w_left = 0.0;
    for (std::size_t pos = 0; pos + 1 < n; ++pos) {
      const std::size_t i = sorted[pos].second;
      left[static_cast<std::size_t>(y[rows[i]])] += row_weight[i];
      w_left += row_weight[i];
      if (sorted[pos].first == sorted[pos + 1].first) continue;
      const std::size_t n_left = pos + 1;
      if (n_left < min_leaf || n - n_left < min_leaf) continue;
      for (std::size_t c = 0; c < k; ++c) right[c] = total[c] - left[c];
      const double w_right = w_total - w_left;
      const double gain = parent - (w_left / w_total) * gini_impurity(left) -
                          (w_right / w_total) * gini_impurity(right);
      if (best.feature < 0 || gain > best.gain) {
        best.feature = f;
        best.threshold = split_midpoint(sorted[pos].first, sorted[pos + 1].first);
        best.gain = gain;
      }
    }
  }
  return best;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const Labels& y, const TreeParams& params, int n_classes, Rng* rng)
      : x_(x), y_(y), params_(params), n_classes_(n_classes), rng_(rng) {
    all_features_.resize(static_cast<std::size_t>(x.cols()));
    std::iota(all_features_.begin(), all_features_.end(), 0);
  }

  std::vector<DecisionTree::Node> build(std::span<const std::size_t> rows, std::span<const double> weights) {
    rows_.assign(rows.begin(), rows.end());
    weights_.assign(weights.begin(), weights.end());
    nodes_.clear();
    grow(0, rows_.size(), 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::size_t begin, std::size_t end, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    std::vector<double> sums(static_cast<std::size_t>(n_classes_), 0.0);
    double total = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      sums[static_cast<std::size_t>(y_[rows_[i]])] += weights_[i];
      total += weights_[i];
    }
    const auto nonzero = std::count_if(sums.begin(), sums.end(), [](double s) { return s > 0.0; });
    const std::size_t n = end - begin;

    GiniSplit split;
    const bool can_split = (params_.max_depth < 0 || depth < params_.max_depth) &&
                           n >= static_cast<std::size_t>(std::max(params_.min_samples_split, 2)) &&
                           nonzero > 1;
    if (can_split) split = find_split(begin, end);

    if (split.feature < 0) {
      auto& leaf = nodes_[static_cast<std::size_t>(id)];
      leaf.value.resize(sums.size());
      for (std::size_t c = 0; c < sums.size(); ++c) leaf.value[c] = total > 0.0 ? sums[c] / total : 0.0;
      if (!(total > 0.0)) std::fill(leaf.value.begin(), leaf.value.end(), 1.0 / static_cast<double>(sums.size()));
      return id;
    }

    // Stable partition keeps row order deterministic within each child.
    std::vector<std::size_t> r_left, r_right;
    std::vector<double> w_left, w_right;
    for (std::size_t i = begin; i < end; ++i) {
      const bool go_left = x_(static_cast<Eigen::Index>(rows_[i]), split.feature) <= split.threshold;
      (go_left ? r_left : r_right).push_back(rows_[i]);
      (go_left ? w_left : w_right).push_back(weights_[i]);
    }
    std::copy(r_left.begin(), r_left.end(), rows_.begin() + static_cast<std::ptrdiff_t>(begin));
    std::copy(r_right.begin(), r_right.end(), rows_.begin() + static_cast<std::ptrdiff_t>(begin + r_left.size()));
    std::copy(w_left.begin(), w_left.end(), weights_.begin() + static_cast<std::ptrdiff_t>(begin));
    std::copy(w_right.begin(), w_right.end(), weights_.begin() + static_cast<std::ptrdiff_t>(begin + w_left.size()));
    const std::size_t mid = begin + r_left.size();

    nodes_[static_cast<std::size_t>(id)].feature = split.feature;
    nodes_[static_cast<std::size_t>(id)].threshold = split.threshold;
    const int l = grow(begin, mid, depth + 1);
    const int r = grow(mid, end, depth + 1);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  GiniSplit find_split(std::size_t begin, std::size_t end) {
    std::span<const std::size_t> rows(rows_.data() + begin, end - begin);
    std::span<const double> weights(weights_.data() + begin, end - begin);
    const int d = static_cast<int>(all_features_.size());
    if (params_.max_features <= 0 || params_.max_features >= d || !rng_)
      return best_gini_split(x_, y_, weights, rows, all_features_, n_classes_, params_.min_samples_leaf);

    // Partial Fisher-Yates draw of max_features candidates; the rest are
    // only tried when none of the drawn features admits a split.
    std::vector<int> order = all_features_;
    const auto m = static_cast<std::size_t>(params_.max_features);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + rng_->below(order.size() - i);
      std::swap(order[i], order[j]);
    }
    std::vector<int> drawn(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(drawn.begin(), drawn.end());
    GiniSplit s = best_gini_split(x_, y_, weights, rows, drawn, n_classes_, params_.min_samples_leaf);
    if (s.feature >= 0) return s;
    std::vector<int> rest(order.begin() + static_cast<std::ptrdiff_t>(m), order.end());
    std::sort(rest.begin(), rest.end());
    return best_gini_split(x_, y_, weights, rows, rest, n_classes_, params_.min_samples_leaf);
  }

  const Matrix& x_;
  const Labels& y_;
  const TreeParams& params_;
  int n_classes_;
  Rng* rng_;
  std::vector<int> all_features_;
  std::vector<std::size_t> rows_;
  std::vector<double> weights_;
  std::vector<DecisionTree::Node> nodes_;
};

void check_fit_inputs(const Matrix& x, const Labels& y) {
  if (y.empty()) throw PreconditionError("fit: empty training data");
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw PreconditionError("fit: row/label count mismatch");
}

}  // namespace

DecisionTree DecisionTree::fit(const Matrix& x, const Labels& y, const TreeParams& params, int n_classes) {
  check_fit_inputs(x, y);
  if (n_classes <= 0) n_classes = count_classes(y);
  const auto cw = class_weights(y, n_classes, params.class_weight);
  std::vector<std::size_t> rows(y.size());
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<double> w(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) w[i] = cw[static_cast<std::size_t>(y[i])];
  return fit_rows(x, y, rows, w, params, n_classes, nullptr);
}

DecisionTree DecisionTree::fit_rows(const Matrix& x, const Labels& y, std::span<const std::size_t> rows,
                                    std::span<const double> row_weight, const TreeParams& params,
                                    int n_classes, Rng* rng) {
  check_fit_inputs(x, y);
  if (rows.empty()) throw PreconditionError("fit: empty row set");
  DecisionTree tree;
  tree.params_ = params;
  tree.n_classes_ = n_classes;
  TreeBuilder builder(x, y, params, n_classes, rng);
  tree.nodes_ = builder.build(rows, row_weight);
  return tree;
}

const std::vector<double>& DecisionTree::leaf_distribution(const double* row, Eigen::Index stride) const {
  int id = 0;
  while (nodes_[static_cast<std::size_t>(id)].feature >= 0) {
    const auto& node = nodes_[static_cast<std::size_t>(id)];
    id = row[node.feature * stride] <= node.threshold ? node.left : node.right;
  }
  return nodes_[static_cast<std::size_t>(id)].value;
}

Matrix DecisionTree::predict_proba(const Matrix& x) const {
  Matrix out(x.rows(), n_classes_);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto& v = leaf_distribution(&x(i, 0), x.rows());
    for (int c = 0; c < n_classes_; ++c) out(i, c) = v[static_cast<std::size_t>(c)];
  }
  return out;
}

int DecisionTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes_[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

Json DecisionTree::parameters() const {
  Json feature = Json::array(), threshold = Json::array(), left = Json::array(), right = Json::array(),
       value = Json::array();
  for (const auto& n : nodes_) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  return Json{{"n_classes", n_classes_}, {"feature", feature}, {"threshold", threshold},
              {"left", left},           {"right", right},     {"value", value}};
}

std::shared_ptr<DecisionTree> DecisionTree::from_json(const Json& hyper, const Json& params) {
  auto t = std::make_shared<DecisionTree>();
  t->params_ = TreeParams::from_json(hyper);
  t->n_classes_ = params.at("n_classes").get<int>();
  const auto& f = params.at("feature");
  t->nodes_.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto& n = t->nodes_[i];
    n.feature = f[i].get<int>();
    n.threshold = params.at("threshold")[i].get<double>();
    n.left = params.at("left")[i].get<int>();
    n.right = params.at("right")[i].get<int>();
    n.value = params.at("value")[i].get<std::vector<double>>();
  }
  return t;
}

Json ForestParams::to_json() const {
  return Json{{"n_trees", n_trees},   {"tree", tree.to_json()}, {"max_features", max_features},
              {"bootstrap", bootstrap}, {"seed", seed}};
}

ForestParams ForestParams::from_json(const Json& j) {
  ForestParams p;
  p.n_trees = j.value("n_trees", p.n_trees);
  if (j.contains("tree")) p.tree = TreeParams::from_json(j.at("tree"));
  p.max_features = j.value("max_features", p.max_features);
  p.bootstrap = j.value("bootstrap", p.bootstrap);
  p.seed = j.value("seed", p.seed);
  return p;
}

int resolve_max_features(const std::string& spec, int n_features) {
  if (spec == "all") return n_features;
  if (spec == "sqrt") return std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n_features))));
  if (spec == "log2") return std::max(1, static_cast<int>(std::log2(static_cast<double>(n_features))));
  auto v = parse_int(spec);
  if (!v || *v < 1) throw PreconditionError("invalid max_features \"" + spec + "\"");
  return std::min(static_cast<int>(*v), n_features);
}

RandomForest RandomForest::fit(const Matrix& x, const Labels& y, const ForestParams& params, int n_classes) {
  check_fit_inputs(x, y);
  if (params.n_trees < 1) throw PreconditionError("forest: n_trees must be >= 1");
  if (n_classes <= 0) n_classes = count_classes(y);
  RandomForest forest;
  forest.params_ = params;
  forest.n_classes_ = n_classes;
  TreeParams tp = params.tree;
  tp.max_features = resolve_max_features(params.max_features, static_cast<int>(x.cols()));
  const auto cw = class_weights(y, n_classes, params.tree.class_weight);
  const std::size_t n = y.size();

  forest.trees_.resize(static_cast<std::size_t>(params.n_trees));
  parallel_for(forest.trees_.size(), params.threads, [&](std::size_t t) {
    Rng rng(derive_seed(params.seed, 0xF0u, t));
    std::vector<std::size_t> rows(n);
    if (params.bootstrap) {
      for (auto& r : rows) r = rng.below(n);
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = cw[static_cast<std::size_t>(y[rows[i]])];
    forest.trees_[t] = DecisionTree::fit_rows(x, y, rows, w, tp, n_classes, &rng);
  });
  return forest;
}

Matrix RandomForest::predict_proba(const Matrix& x) const {
  Matrix out = Matrix::Zero(x.rows(), n_classes_);
  for (const auto& tree : trees_) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const auto& v = tree.leaf_distribution(&x(i, 0), x.rows());
      for (int c = 0; c < n_classes_; ++c) out(i, c) += v[static_cast<std::size_t>(c)];
    }
  }
  out /= static_cast<double>(trees_.size());
  return out;
}

Json RandomForest::hyperparameters() const { return params_.to_json(); }

Json RandomForest::parameters() const {
  Json trees = Json::array();
  for (const auto& t : trees_) trees.push_back(t.parameters());
  return Json{{"n_classes", n_classes_}, {"trees", trees}};
}

std::shared_ptr<RandomForest> RandomForest::from_json(const Json& hyper, const Json& params) {
  auto f = std::make_shared<RandomForest>();
  f->params_ = ForestParams::from_json(hyper);
  f->n_classes_ = params.at("n_classes").get<int>();
  TreeParams tp = f->params_.tree;
  const Json tree_hyper = tp.to_json();
  for (const auto& tj : params.at("trees")) f->trees_.push_back(*DecisionTree::from_json(tree_hyper, tj));
  return f;
}

}  // namespace bushfire
