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

#include "bushfire/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bushfire/parallel.hpp"
#include "bushfire/tree.hpp"

namespace bushfire {

std::string_view to_string(Growth g) { return g == Growth::kDepthWise ? "depth_wise" : "leaf_wise"; }

Growth parse_growth(std::string_view s) {
  if (s == "depth_wise" || s == "depth-wise") return Growth::kDepthWise;
  if (s == "leaf_wise" || s == "leaf-wise") return Growth::kLeafWise;
  throw PreconditionError("unknown growth \"" + std::string(s) + "\" (expected depth_wise or leaf_wise)");
}

void GbdtParams::validate() const {
  if (n_estimators < 0) throw PreconditionError("gbdt: n_estimators must be >= 0");
  if (!(learning_rate >= 0.0)) throw PreconditionError("gbdt: learning_rate must be >= 0");
  if (!(l2_lambda >= 0.0)) throw PreconditionError("gbdt: l2_lambda must be >= 0");
  if (n_bins < 2 || n_bins > 65535) throw PreconditionError("gbdt: n_bins must be in [2, 65535]");
  if (growth == Growth::kLeafWise && max_leaves < 2) throw PreconditionError("gbdt: max_leaves must be >= 2");
  if (growth == Growth::kDepthWise && max_depth < 0) throw PreconditionError("gbdt: max_depth must be >= 0");
  if (min_samples_leaf < 1) throw PreconditionError("gbdt: min_samples_leaf must be >= 1");
  if (!(scale_pos_weight > 0.0)) throw PreconditionError("gbdt: scale_pos_weight must be > 0");
  if (early_stopping_rounds < 0) throw PreconditionError("gbdt: early_stopping_rounds must be >= 0");
}

Json GbdtParams::to_json() const {
  return Json{{"growth", std::string(to_string(growth))},
              {"n_estimators", n_estimators},
              {"learning_rate", learning_rate},
              {"max_depth", max_depth},
              {"max_leaves", max_leaves},
              {"l2_lambda", l2_lambda},
              {"n_bins", n_bins},
              {"min_samples_leaf", min_samples_leaf},
              {"min_child_weight", min_child_weight},
              {"scale_pos_weight", scale_pos_weight},
              {"early_stopping_rounds", early_stopping_rounds}};
}

GbdtParams GbdtParams::from_json(const Json& j) {
  GbdtParams p;
  p.growth = parse_growth(j.value("growth", std::string(to_string(p.growth))));
  p.n_estimators = j.value("n_estimators", p.n_estimators);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.max_depth = j.value("max_depth", p.max_depth);
  p.max_leaves = j.value("max_leaves", p.max_leaves);
  p.l2_lambda = j.value("l2_lambda", p.l2_lambda);
  p.n_bins = j.value("n_bins", p.n_bins);
  p.min_samples_leaf = j.value("min_samples_leaf", p.min_samples_leaf);
  p.min_child_weight = j.value("min_child_weight", p.min_child_weight);
  p.scale_pos_weight = j.value("scale_pos_weight", p.scale_pos_weight);
  p.early_stopping_rounds = j.value("early_stopping_rounds", p.early_stopping_rounds);
  return p;
}

BinMapper BinMapper::fit(const Matrix& x, int n_bins) {
  BinMapper m;
  m.edges.resize(static_cast<std::size_t>(x.cols()));
  std::vector<double> v;
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    v.assign(x.col(f).data(), x.col(f).data() + x.rows());
    std::sort(v.begin(), v.end());
    auto& e = m.edges[static_cast<std::size_t>(f)];
    std::vector<double> distinct(v.begin(), std::unique(v.begin(), v.end()));
    if (static_cast<int>(distinct.size()) <= n_bins) {
      for (std::size_t i = 0; i + 1 < distinct.size(); ++i) e.push_back(split_midpoint(distinct[i], distinct[i + 1]));
      continue;
    }
    // Quantile edges on the full sorted sample; a boundary inside a run of
    // equal values moves to the end of that run.
    v.assign(x.col(f).data(), x.col(f).data() + x.rows());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    for (int k = 1; k < n_bins; ++k) {
      std::size_t pos = static_cast<std::size_t>(static_cast<double>(k) * static_cast<double>(n) / n_bins);
      while (pos < n && v[pos] == v[pos - 1]) ++pos;
      if (pos >= n) break;
      const double edge = split_midpoint(v[pos - 1], v[pos]);
      if (e.empty() || edge > e.back()) e.push_back(edge);
    }
  }
  return m;
}

std::uint16_t BinMapper::bin(int feature, double v) const {
  const auto& e = edges[static_cast<std::size_t>(feature)];
  return static_cast<std::uint16_t>(std::lower_bound(e.begin(), e.end(), v) - e.begin());
}

double logistic_loss(std::span<const double> score, std::span<const double> target,
                     std::span<const double> weight) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < score.size(); ++i) {
    const double s = score[i];
    // log(1 + e^s) - t*s, stable for large |s|.
    const double softplus = s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
    num += weight[i] * (softplus - target[i] * s);
    den += weight[i];
  }
  return num / den;
}

namespace {

double sigmoid(double s) {
  if (s >= 0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

struct Split {
  int feature = -1;
  int bin = -1;
  double gain = 0.0;
};

struct Leaf {
  int id;
  std::size_t begin, end;
  int depth;
  double g, h;
  Split split;
};

class TreeGrower {
 public:
  TreeGrower(const std::vector<std::uint16_t>& binned, std::size_t n_rows, const BinMapper& bins,
             const GbdtParams& p)
      : binned_(binned), n_rows_(n_rows), bins_(bins), p_(p), n_features_(static_cast<int>(bins.edges.size())) {}

  Gbdt::Tree grow(const std::vector<double>& g, const std::vector<double>& h, std::vector<std::size_t>& rows) {
    g_ = &g;
    h_ = &h;
    rows_ = &rows;
    Gbdt::Tree tree(1);
    Leaf root{0, 0, rows.size(), 0, 0.0, 0.0, {}};
    for (std::size_t r : rows) {
      root.g += g[r];
      root.h += h[r];
    }
    std::vector<Leaf> leaves;
    if (p_.growth == Growth::kDepthWise) {
      std::vector<Leaf> level{root};
      while (!level.empty()) {
        std::vector<Leaf> next;
        for (auto& leaf : level) {
          if (leaf.depth < p_.max_depth) leaf.split = find_split(leaf);
          if (leaf.split.feature < 0) {
            leaves.push_back(leaf);
            continue;
          }
          auto [l, r] = apply(tree, leaf);
          next.push_back(l);
          next.push_back(r);
        }
        level = std::move(next);
      }
    } else {
      std::vector<Leaf> open{root};
      open.back().split = evaluate(open.back());
      while (static_cast<int>(open.size() + leaves.size()) < p_.max_leaves) {
        // Best gain, ties to the lowest node id.
        std::size_t best = open.size();
        for (std::size_t i = 0; i < open.size(); ++i) {
          if (open[i].split.feature < 0) continue;
          if (best == open.size() || open[i].split.gain > open[best].split.gain ||
              (open[i].split.gain == open[best].split.gain && open[i].id < open[best].id))
            best = i;
        }
        if (best == open.size()) break;
        Leaf leaf = open[best];
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(best));
        auto [l, r] = apply(tree, leaf);
        l.split = evaluate(l);
        r.split = evaluate(r);
        open.push_back(l);
        open.push_back(r);
      }
      leaves.insert(leaves.end(), open.begin(), open.end());
    }
    for (const auto& leaf : leaves) {
      const double denom = leaf.h + p_.l2_lambda;
      tree[static_cast<std::size_t>(leaf.id)].value = denom > 0.0 ? -p_.learning_rate * leaf.g / denom : 0.0;
    }
    return tree;
  }

 private:
  Split evaluate(const Leaf& leaf) {
    if (p_.max_depth >= 0 && leaf.depth >= p_.max_depth) return {};
    return find_split(leaf);
  }

  Split find_split(const Leaf& leaf) {
    const std::size_t n = leaf.end - leaf.begin;
    if (n < 2 * static_cast<std::size_t>(p_.min_samples_leaf)) return {};
    std::vector<Split> per_feature(static_cast<std::size_t>(n_features_));
    const double parent = leaf.g * leaf.g / (leaf.h + p_.l2_lambda);
    parallel_for(per_feature.size(), p_.threads, [&](std::size_t fi) {
      const int f = static_cast<int>(fi);
      const int nb = bins_.bins(f);
      if (nb < 2) return;
      std::vector<double> hg(static_cast<std::size_t>(nb), 0.0), hh(static_cast<std::size_t>(nb), 0.0);
      std::vector<std::size_t> hc(static_cast<std::size_t>(nb), 0);
      const std::uint16_t* col = binned_.data() + fi * n_rows_;
      for (std::size_t k = leaf.begin; k < leaf.end; ++k) {
        const std::size_t r = (*rows_)[k];
        const std::size_t b = col[r];
        hg[b] += (*g_)[r];
        hh[b] += (*h_)[r];
        ++hc[b];
      }
      Split best;
      double gl = 0.0, hl = 0.0;
      std::size_t nl = 0;
      for (int b = 0; b + 1 < nb; ++b) {
        gl += hg[static_cast<std::size_t>(b)];
        hl += hh[static_cast<std::size_t>(b)];
        nl += hc[static_cast<std::size_t>(b)];
        const std::size_t nr = n - nl;
        if (nl < static_cast<std::size_t>(p_.min_samples_leaf)) continue;
        if (nr < static_cast<std::size_t>(p_.min_samples_leaf)) break;
        const double gr = leaf.g - gl, hr = leaf.h - hl;
        if (hl < p_.min_child_weight || hr < p_.min_child_weight) continue;
        const double gain =
            0.5 * (gl * gl / (hl + p_.l2_lambda) + gr * gr / (hr + p_.l2_lambda) - parent);
        if (gain > best.gain) best = {f, b, gain};
      }
      per_feature[fi] = best;
    });
    Split best;
    for (const auto& s : per_feature)
      if (s.feature >= 0 && s.gain > best.gain) best = s;
    return best;
  }

  std::pair<Leaf, Leaf> apply(Gbdt::Tree& tree, const Leaf& leaf) {
    const Split s = leaf.split;
    const std::uint16_t* col = binned_.data() + static_cast<std::size_t>(s.feature) * n_rows_;
    auto& rows = *rows_;
    const auto mid = std::stable_partition(rows.begin() + static_cast<std::ptrdiff_t>(leaf.begin),
                                           rows.begin() + static_cast<std::ptrdiff_t>(leaf.end),
                                           [&](std::size_t r) { return col[r] <= s.bin; });
    const std::size_t m = static_cast<std::size_t>(mid - rows.begin());
    Leaf l{static_cast<int>(tree.size()), leaf.begin, m, leaf.depth + 1, 0.0, 0.0, {}};
    Leaf r{static_cast<int>(tree.size()) + 1, m, leaf.end, leaf.depth + 1, 0.0, 0.0, {}};
    for (std::size_t k = l.begin; k < l.end; ++k) {
      l.g += (*g_)[rows[k]];
      l.h += (*h_)[rows[k]];
    }
    r.g = leaf.g - l.g;
    r.h = leaf.h - l.h;
    auto& node = tree[static_cast<std::size_t>(leaf.id)];
    node.feature = s.feature;
    node.threshold = bins_.edges[static_cast<std::size_t>(s.feature)][static_cast<std::size_t>(s.bin)];
    node.left = l.id;
    node.right = r.id;
    tree.emplace_back();
    tree.emplace_back();
    return {l, r};
  }

  const std::vector<std::uint16_t>& binned_;
  std::size_t n_rows_;
  const BinMapper& bins_;
  const GbdtParams& p_;
  int n_features_;
  const std::vector<double>* g_ = nullptr;
  const std::vector<double>* h_ = nullptr;
  std::vector<std::size_t>* rows_ = nullptr;
};

double tree_value(const Gbdt::Tree& tree, const Matrix& x, Eigen::Index i) {
  int id = 0;
  while (tree[static_cast<std::size_t>(id)].feature >= 0) {
    const auto& n = tree[static_cast<std::size_t>(id)];
    id = x(i, n.feature) <= n.threshold ? n.left : n.right;
  }
  return tree[static_cast<std::size_t>(id)].value;
}

Json tree_to_json(const Gbdt::Tree& t) {
  Json feature = Json::array(), threshold = Json::array(), left = Json::array(), right = Json::array(),
       value = Json::array();
  for (const auto& n : t) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  return Json{{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
}

Gbdt::Tree tree_from_json(const Json& j) {
  Gbdt::Tree t(j.at("feature").size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i].feature = j.at("feature")[i].get<int>();
    t[i].threshold = j.at("threshold")[i].get<double>();
    t[i].left = j.at("left")[i].get<int>();
    t[i].right = j.at("right")[i].get<int>();
    t[i].value = j.at("value")[i].get<double>();
  }
  return t;
}

}  // namespace

Gbdt Gbdt::fit(const Matrix& x, const Labels& y, const GbdtParams& params, int n_classes,
               const Matrix* x_val, const Labels* y_val) {
  params.validate();
  if (y.empty()) throw PreconditionError("gbdt: empty training data");
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw PreconditionError("gbdt: row/label count mismatch");
  if (n_classes <= 0) n_classes = count_classes(y);
  const auto counts = class_counts(y, n_classes);
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2)
    throw PreconditionError("gbdt: training labels contain a single class");
  const bool has_val = x_val && y_val && !y_val->empty();
  if (params.early_stopping_rounds > 0 && !has_val)
    throw PreconditionError("gbdt: early stopping needs a validation set");

  Gbdt model;
  model.params_ = params;
  model.n_classes_ = n_classes;
  const int n_out = n_classes == 2 ? 1 : n_classes;
  const std::size_t n = y.size();

  const BinMapper bins = BinMapper::fit(x, params.n_bins);
  std::vector<std::uint16_t> binned(n * static_cast<std::size_t>(x.cols()));
  parallel_for(static_cast<std::size_t>(x.cols()), params.threads, [&](std::size_t f) {
    for (std::size_t i = 0; i < n; ++i)
      binned[f * n + i] = bins.bin(static_cast<int>(f), x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)));
  });

  // Targets and weights per output.
  auto targets_for = [&](const Labels& labels, int k) {
    std::vector<double> t(labels.size());
    const int positive = n_out == 1 ? 1 : k;
    for (std::size_t i = 0; i < labels.size(); ++i) t[i] = labels[i] == positive ? 1.0 : 0.0;
    return t;
  };
  auto weights_for = [&](const std::vector<double>& t) {
    std::vector<double> w(t.size(), 1.0);
    if (n_out == 1)
      for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] == 1.0) w[i] = params.scale_pos_weight;
    return w;
  };

  std::vector<std::vector<double>> target(static_cast<std::size_t>(n_out)), weight(static_cast<std::size_t>(n_out)),
      score(static_cast<std::size_t>(n_out));
  std::vector<std::vector<double>> v_target, v_weight, v_score;
  model.prior_.resize(static_cast<std::size_t>(n_out));
  model.trees_.resize(static_cast<std::size_t>(n_out));
  for (int k = 0; k < n_out; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    target[ku] = targets_for(y, k);
    weight[ku] = weights_for(target[ku]);
    double pos = 0.0, tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pos += weight[ku][i] * target[ku][i];
      tot += weight[ku][i];
    }
    if (pos <= 0.0 || pos >= tot) throw PreconditionError("gbdt: one-vs-rest target has a single class");
    model.prior_[ku] = std::log(pos / (tot - pos));
    score[ku].assign(n, model.prior_[ku]);
    if (has_val) {
      v_target.push_back(targets_for(*y_val, k));
      v_weight.push_back(weights_for(v_target.back()));
      v_score.emplace_back(y_val->size(), model.prior_[ku]);
    }
  }

  auto mean_loss = [&](const auto& s, const auto& t, const auto& w) {
    double total = 0.0;
    for (int k = 0; k < n_out; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      total += logistic_loss(s[ku], t[ku], w[ku]);
    }
    return total / n_out;
  };

  TreeGrower grower(binned, n, bins, params);
  std::vector<double> g(n), h(n);
  std::vector<std::size_t> rows(n);
  std::size_t best_round = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int round = 0; round < params.n_estimators; ++round) {
    for (int k = 0; k < n_out; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      for (std::size_t i = 0; i < n; ++i) {
        const double p = sigmoid(score[ku][i]);
        g[i] = weight[ku][i] * (p - target[ku][i]);
        h[i] = weight[ku][i] * p * (1.0 - p);
      }
      for (std::size_t i = 0; i < n; ++i) rows[i] = i;
      Tree tree = grower.grow(g, h, rows);
      for (std::size_t i = 0; i < n; ++i) score[ku][i] += tree_value(tree, x, static_cast<Eigen::Index>(i));
      if (has_val)
        for (std::size_t i = 0; i < y_val->size(); ++i)
          v_score[ku][i] += tree_value(tree, *x_val, static_cast<Eigen::Index>(i));
      model.trees_[ku].push_back(std::move(tree));
    }
    model.train_loss_.push_back(mean_loss(score, target, weight));
    if (has_val) {
      const double vl = mean_loss(v_score, v_target, v_weight);
      model.valid_loss_.push_back(vl);
      if (vl < best_val) {
        best_val = vl;
        best_round = static_cast<std::size_t>(round) + 1;
      } else if (params.early_stopping_rounds > 0 &&
                 static_cast<int>(static_cast<std::size_t>(round) + 1 - best_round) >= params.early_stopping_rounds) {
        break;
      }
    }
  }
  if (params.early_stopping_rounds > 0)
    for (auto& stage : model.trees_) stage.resize(best_round);
  return model;
}

Matrix Gbdt::raw_score(const Matrix& x) const {
  const auto n_out = static_cast<Eigen::Index>(trees_.size());
  Matrix s(x.rows(), n_out);
  for (Eigen::Index k = 0; k < n_out; ++k) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double v = prior_[static_cast<std::size_t>(k)];
      for (const auto& t : trees_[static_cast<std::size_t>(k)]) v += tree_value(t, x, i);
      s(i, k) = v;
    }
  }
  return s;
}

Matrix Gbdt::predict_proba(const Matrix& x) const {
  const Matrix s = raw_score(x);
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

Json Gbdt::parameters() const {
  Json stages = Json::array();
  for (const auto& stage : trees_) {
    Json ts = Json::array();
    for (const auto& t : stage) ts.push_back(tree_to_json(t));
    stages.push_back(std::move(ts));
  }
  return Json{{"n_classes", n_classes_}, {"prior", prior_}, {"trees", stages}, {"train_loss", train_loss_},
              {"valid_loss", valid_loss_}};
}

std::shared_ptr<Gbdt> Gbdt::from_json(const Json& hyper, const Json& params) {
  auto m = std::make_shared<Gbdt>();
  m->params_ = GbdtParams::from_json(hyper);
  m->n_classes_ = params.at("n_classes").get<int>();
  m->prior_ = params.at("prior").get<std::vector<double>>();
  for (const auto& stage : params.at("trees")) {
    std::vector<Tree> ts;
    for (const auto& t : stage) ts.push_back(tree_from_json(t));
    m->trees_.push_back(std::move(ts));
  }
  m->train_loss_ = params.value("train_loss", std::vector<double>{});
  m->valid_loss_ = params.value("valid_loss", std::vector<double>{});
  return m;
}

}  // namespace bushfire
