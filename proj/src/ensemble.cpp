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

#include "bushfire/ensemble.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "bushfire/gbdt.hpp"
#include "bushfire/metrics.hpp"
#include "bushfire/mlp.hpp"
#include "bushfire/parallel.hpp"
#include "bushfire/random.hpp"
#include "bushfire/text.hpp"
#include "bushfire/tree.hpp"

namespace bushfire {

std::vector<int> stratified_kfold(const Labels& y, int k, std::uint64_t seed) {
  if (k < 2) throw PreconditionError("kfold: k must be >= 2");
  const int n_classes = count_classes(y);
  const auto counts = class_counts(y, n_classes);
  for (int c = 0; c < n_classes; ++c) {
    const auto n_c = counts[static_cast<std::size_t>(c)];
    if (n_c > 0 && n_c < static_cast<std::size_t>(k))
      throw PreconditionError("kfold: class " + std::to_string(c) + " has " + std::to_string(n_c) +
                              " rows, fewer than k=" + std::to_string(k));
  }
  std::vector<int> fold(y.size(), -1);
  std::size_t next = 0;
  for (int c = 0; c < n_classes; ++c) {
    Indices members;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] == c) members.push_back(i);
    Rng rng(derive_seed(seed, 0xF01Du, static_cast<std::uint64_t>(c)));
    rng.shuffle(members);
    for (std::size_t i : members) fold[i] = static_cast<int>(next++ % static_cast<std::size_t>(k));
  }
  return fold;
}

PriorClassifier PriorClassifier::fit(const Labels& y, int n_classes) {
  if (y.empty()) throw PreconditionError("majority: empty training data");
  if (n_classes <= 0) n_classes = count_classes(y);
  PriorClassifier m;
  for (auto c : class_counts(y, n_classes)) m.prior_.push_back(static_cast<double>(c) / static_cast<double>(y.size()));
  return m;
}

Matrix PriorClassifier::predict_proba(const Matrix& x) const {
  Matrix p(x.rows(), static_cast<Eigen::Index>(prior_.size()));
  for (Eigen::Index c = 0; c < p.cols(); ++c) p.col(c).setConstant(prior_[static_cast<std::size_t>(c)]);
  return p;
}

std::shared_ptr<PriorClassifier> PriorClassifier::from_json(const Json& params) {
  auto m = std::make_shared<PriorClassifier>();
  m->prior_ = params.at("prior").get<std::vector<double>>();
  return m;
}

namespace {

// Forest params accept tree keys at the top level as well as under "tree".
ForestParams forest_params(const Json& j) {
  ForestParams p = ForestParams::from_json(j);
  Json tree = p.tree.to_json();
  for (const char* key : {"max_depth", "min_samples_split", "min_samples_leaf", "class_weight"})
    if (j.contains(key)) tree[key] = j.at(key);
  p.tree = TreeParams::from_json(tree);
  return p;
}

}  // namespace

ClassifierPtr fit_learner(const LearnerSpec& spec, const Matrix& x, const Labels& y, int n_classes,
                          std::uint64_t seed, int threads) {
  const Json& j = spec.params;
  try {
    if (spec.family == "tree")
      return std::make_shared<DecisionTree>(DecisionTree::fit(x, y, TreeParams::from_json(j), n_classes));
    if (spec.family == "forest") {
      ForestParams p = forest_params(j);
      p.seed = seed;
      p.threads = threads;
      return std::make_shared<RandomForest>(RandomForest::fit(x, y, p, n_classes));
    }
    if (spec.family == "gbdt") {
      GbdtParams p = GbdtParams::from_json(j);
      p.threads = threads;
      return std::make_shared<Gbdt>(Gbdt::fit(x, y, p, n_classes));
    }
    if (spec.family == "logistic")
      return std::make_shared<LogisticRegression>(
          LogisticRegression::fit(x, y, LogisticParams::from_json(j), n_classes));
    if (spec.family == "mlp") {
      MlpParams p = MlpParams::from_json(j);
      p.seed = seed;
      return std::make_shared<Mlp>(Mlp::fit(x, y, p, n_classes));
    }
    if (spec.family == "majority") return std::make_shared<PriorClassifier>(PriorClassifier::fit(y, n_classes));
  } catch (const Json::exception& e) {
    throw PreconditionError(spec.family + ": bad hyperparameter: " + e.what());
  }
  throw PreconditionError("unknown model family \"" + spec.family + "\"");
}

ClassifierPtr load_classifier(const std::string& family, const Json& hyper, const Json& params) {
  try {
    if (family == "tree") return DecisionTree::from_json(hyper, params);
    if (family == "forest") return RandomForest::from_json(hyper, params);
    if (family == "gbdt") return Gbdt::from_json(hyper, params);
    if (family == "logistic") return LogisticRegression::from_json(hyper, params);
    if (family == "mlp") return Mlp::from_json(hyper, params);
    if (family == "majority") return PriorClassifier::from_json(params);
    if (family == "stack") return StackedModel::from_json(hyper, params);
  } catch (const Json::exception& e) {
    throw SchemaError("artifact: malformed " + family + " parameters: " + e.what());
  }
  throw SchemaError("artifact: unknown model family \"" + family + "\"");
}

void StackConfig::validate() const {
  if (base.size() < 2) throw PreconditionError("stack: at least two base learners are required");
  if (n_folds < 2) throw PreconditionError("stack: n_folds must be >= 2");
  if (resample) resample->validate();
}

Json StackConfig::to_json() const {
  Json b = Json::array();
  for (const auto& s : base) b.push_back(Json{{"family", s.family}, {"params", s.params}});
  Json j{{"base", b}, {"meta", meta.to_json()}, {"n_folds", n_folds}, {"seed", seed}};
  if (resample)
    j["resample"] = Json{{"k_neighbors", resample->k_neighbors},
                         {"target_ratio", resample->target_ratio},
                         {"tomek_policy", std::string(to_string(resample->tomek_policy))}};
  return j;
}

Matrix drop_first_class(const Matrix& proba) { return proba.rightCols(proba.cols() - 1); }

StackedModel::StackedModel(std::vector<ClassifierPtr> base, LogisticRegression meta, Json config)
    : base_(std::move(base)), meta_(std::move(meta)), config_(std::move(config)) {}

Matrix StackedModel::meta_features(const Matrix& x) const {
  const auto k = meta_.n_classes() - 1;
  Matrix f(x.rows(), k * static_cast<Eigen::Index>(base_.size()));
  for (std::size_t b = 0; b < base_.size(); ++b)
    f.middleCols(static_cast<Eigen::Index>(b) * k, k) = drop_first_class(base_[b]->predict_proba(x));
  return f;
}

Matrix StackedModel::predict_proba(const Matrix& x) const { return meta_.predict_proba(meta_features(x)); }

Json StackedModel::parameters() const {
  Json base = Json::array();
  for (const auto& b : base_)
    base.push_back(Json{{"family", b->family()}, {"hyperparameters", b->hyperparameters()},
                        {"parameters", b->parameters()}});
  return Json{{"base", base},
              {"meta", Json{{"hyperparameters", meta_.hyperparameters()}, {"parameters", meta_.parameters()}}}};
}

std::vector<std::string> StackedModel::warnings() const {
  std::vector<std::string> w;
  for (const auto& b : base_)
    for (auto& s : b->warnings()) w.push_back(b->family() + ": " + s);
  for (auto& s : meta_.warnings()) w.push_back("meta: " + s);
  return w;
}

std::shared_ptr<StackedModel> StackedModel::from_json(const Json& hyper, const Json& params) {
  std::vector<ClassifierPtr> base;
  for (const auto& b : params.at("base"))
    base.push_back(load_classifier(b.at("family").get<std::string>(), b.at("hyperparameters"), b.at("parameters")));
  const auto& m = params.at("meta");
  auto meta = LogisticRegression::from_json(m.at("hyperparameters"), m.at("parameters"));
  return std::make_shared<StackedModel>(std::move(base), *meta, hyper);
}

namespace {

struct FoldData {
  Indices train;
  Indices held_out;
};

std::vector<FoldData> split_folds(const std::vector<int>& fold, int k) {
  std::vector<FoldData> out(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < fold.size(); ++i)
    for (int f = 0; f < k; ++f) (f == fold[i] ? out[static_cast<std::size_t>(f)].held_out : out[static_cast<std::size_t>(f)].train).push_back(i);
  return out;
}

Resampled maybe_resample(const Matrix& x, const Labels& y, const std::optional<ResampleConfig>& cfg,
                         std::uint64_t seed, int threads) {
  if (!cfg) return {x, y};
  ResampleConfig c = *cfg;
  c.seed = seed;
  c.threads = threads;
  return smote_tomek(x, y, c);
}

}  // namespace

StackFit fit_stack(const Matrix& x, const Labels& y, const StackConfig& config, int n_classes) {
  config.validate();
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw PreconditionError("stack: row/label count mismatch");
  if (n_classes <= 0) n_classes = count_classes(y);
  const Eigen::Index width = n_classes - 1;
  const auto n_base = config.base.size();

  StackFit out;
  out.folds = stratified_kfold(y, config.n_folds, derive_seed(config.seed, 0x57ACu));
  const auto folds = split_folds(out.folds, config.n_folds);
  out.oof_meta = Matrix::Zero(x.rows(), width * static_cast<Eigen::Index>(n_base));

  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto& fd = folds[f];
    const Resampled tr = maybe_resample(take_rows(x, fd.train), take(y, fd.train), config.resample,
                                        derive_seed(config.seed, 0x7E5Au, f), config.threads);
    const Matrix held = take_rows(x, fd.held_out);
    for (std::size_t b = 0; b < n_base; ++b) {
      const auto model = fit_learner(config.base[b], tr.x, tr.y, n_classes,
                                     derive_seed(config.seed, 0xBA5E0u + b, f), config.threads);
      const Matrix p = drop_first_class(model->predict_proba(held));
      for (std::size_t r = 0; r < fd.held_out.size(); ++r)
        out.oof_meta.block(static_cast<Eigen::Index>(fd.held_out[r]), static_cast<Eigen::Index>(b) * width, 1, width) =
            p.row(static_cast<Eigen::Index>(r));
    }
    out.trained_on.push_back(fd.train);
    out.audit.push_back("fold " + std::to_string(f) + ": base learners fit on " + std::to_string(fd.train.size()) +
                        " rows (" + std::to_string(tr.y.size()) + " after resampling), meta-features for " +
                        std::to_string(fd.held_out.size()) + " held-out rows");
  }

  LogisticRegression meta = LogisticRegression::fit(out.oof_meta, y, config.meta, n_classes);

  out.oof_proba.resize(x.rows(), n_classes);
  for (const auto& fd : folds) {
    const auto m = LogisticRegression::fit(take_rows(out.oof_meta, fd.train), take(y, fd.train), config.meta, n_classes);
    const Matrix p = m.predict_proba(take_rows(out.oof_meta, fd.held_out));
    for (std::size_t r = 0; r < fd.held_out.size(); ++r)
      out.oof_proba.row(static_cast<Eigen::Index>(fd.held_out[r])) = p.row(static_cast<Eigen::Index>(r));
  }

  const Resampled full = maybe_resample(x, y, config.resample, derive_seed(config.seed, 0x7E5Au, folds.size()),
                                        config.threads);
  std::vector<ClassifierPtr> base;
  for (std::size_t b = 0; b < n_base; ++b)
    base.push_back(fit_learner(config.base[b], full.x, full.y, n_classes,
                               derive_seed(config.seed, 0xBA5E0u + b, folds.size()), config.threads));
  out.audit.push_back("final base learners fit on " + std::to_string(full.y.size()) + " rows");
  out.model = std::make_shared<StackedModel>(std::move(base), std::move(meta), config.to_json());
  return out;
}

std::string_view to_string(Scoring s) {
  switch (s) {
    case Scoring::kHighRecall: return "high_recall";
    case Scoring::kAccuracy: return "accuracy";
    default: return "macro_f1";
  }
}

Scoring parse_scoring(std::string_view s) {
  if (s == "macro_f1") return Scoring::kMacroF1;
  if (s == "high_recall") return Scoring::kHighRecall;
  if (s == "accuracy") return Scoring::kAccuracy;
  throw PreconditionError("unknown scoring \"" + std::string(s) + "\" (expected macro_f1, high_recall or accuracy)");
}

double score_predictions(const Labels& truth, const Labels& predicted, int n_classes, Scoring scoring) {
  std::vector<std::string> names;
  for (int c = 0; c < n_classes; ++c) names.push_back(std::to_string(c));
  const auto r = classification_report(truth, predicted, names);
  switch (scoring) {
    case Scoring::kHighRecall: return r.per_class.back().recall;
    case Scoring::kAccuracy: return r.accuracy;
    default: return r.macro.f1;
  }
}

Distribution Distribution::choice(std::vector<Json> values) {
  if (values.empty()) throw PreconditionError("search: empty choice list");
  Distribution d;
  d.kind = Kind::kChoice;
  d.choices = std::move(values);
  return d;
}

Distribution Distribution::uniform(double low, double high) {
  if (!(low <= high)) throw PreconditionError("search: uniform needs low <= high");
  Distribution d;
  d.kind = Kind::kUniform;
  d.low = low;
  d.high = high;
  return d;
}

Distribution Distribution::log_uniform(double low, double high) {
  if (!(low > 0.0 && low <= high)) throw PreconditionError("search: log_uniform needs 0 < low <= high");
  Distribution d = uniform(low, high);
  d.kind = Kind::kLogUniform;
  return d;
}

Distribution Distribution::int_uniform(int low, int high) {
  Distribution d = uniform(low, high);
  d.kind = Kind::kIntUniform;
  return d;
}

Json Distribution::sample(Rng& rng) const {
  switch (kind) {
    case Kind::kChoice: return choices[rng.below(choices.size())];
    case Kind::kUniform: return low == high ? low : rng.uniform(low, high);
    case Kind::kLogUniform:
      return low == high ? low : std::exp(rng.uniform(std::log(low), std::log(high)));
    case Kind::kIntUniform: {
      const auto lo = static_cast<long long>(low), hi = static_cast<long long>(high);
      return lo + static_cast<long long>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
  }
  return nullptr;
}

std::string SearchResult::to_csv() const {
  std::ostringstream ss;
  std::size_t folds = table.empty() ? 0 : table.front().fold_scores.size();
  ss << "iteration,params";
  for (std::size_t f = 0; f < folds; ++f) ss << ",fold" << f;
  ss << ",mean,best\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    ss << i << ',' << join_csv({table[i].params.dump()});
    for (double s : table[i].fold_scores) ss << ',' << format_double(s);
    ss << ',' << format_double(table[i].mean_score) << ',' << (i == best_index ? 1 : 0) << '\n';
  }
  return ss.str();
}

SearchResult random_search(const Matrix& x, const Labels& y, const LearnerSpec& base, const SearchSpec& spec,
                           int n_classes) {
  if (spec.n_iter < 1) throw PreconditionError("search: n_iter must be >= 1");
  if (n_classes <= 0) n_classes = count_classes(y);
  const auto fold = stratified_kfold(y, spec.n_folds, derive_seed(spec.seed, 0xC5Fu));
  const auto folds = split_folds(fold, spec.n_folds);

  SearchResult result;
  result.table.resize(static_cast<std::size_t>(spec.n_iter));
  for (int it = 0; it < spec.n_iter; ++it) {
    Rng rng(derive_seed(spec.seed, 0x5EA7u, static_cast<std::uint64_t>(it)));
    Json params = base.params.is_object() ? base.params : Json::object();
    for (const auto& [key, dist] : spec.space) params[key] = dist.sample(rng);
    result.table[static_cast<std::size_t>(it)].params = params;
    result.table[static_cast<std::size_t>(it)].fold_scores.resize(folds.size());
  }

  // Each (iteration, fold) is an independent task with its own seed.
  const std::size_t n_tasks = result.table.size() * folds.size();
  parallel_for(n_tasks, spec.threads, [&](std::size_t task) {
    const std::size_t it = task / folds.size(), f = task % folds.size();
    const auto& fd = folds[f];
    const Resampled tr = maybe_resample(take_rows(x, fd.train), take(y, fd.train), spec.resample,
                                        derive_seed(spec.seed, 0x7E5Au, f), 1);
    const auto model = fit_learner({base.family, result.table[it].params}, tr.x, tr.y, n_classes,
                                   derive_seed(spec.seed, it, f), 1);
    const Labels pred = argmax_rows(model->predict_proba(take_rows(x, fd.held_out)));
    result.table[it].fold_scores[f] = score_predictions(take(y, fd.held_out), pred, n_classes, spec.scoring);
  });

  for (std::size_t i = 0; i < result.table.size(); ++i) {
    auto& row = result.table[i];
    row.mean_score = std::accumulate(row.fold_scores.begin(), row.fold_scores.end(), 0.0) /
                     static_cast<double>(row.fold_scores.size());
    if (i == 0 || row.mean_score > result.best_score) {
      result.best_score = row.mean_score;
      result.best_index = i;
    }
  }
  result.best_params = result.table[result.best_index].params;
  return result;
}

std::string ThresholdResult::to_csv() const {
  std::ostringstream ss;
  ss << "threshold,f1\n";
  for (const auto& [t, f] : curve) ss << format_double(t) << ',' << format_double(f) << '\n';
  return ss.str();
}

ThresholdResult optimize_threshold(std::span<const double> p_high, const Labels& labels, DataRole role) {
  if (role == DataRole::kTest)
    throw LeakageError("threshold selection on the test split; use a validation split or cross-validation");
  if (p_high.size() != labels.size()) throw PreconditionError("threshold: probability/label count mismatch");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw PreconditionError("threshold: labels must be 0/1");
    if (!(p_high[i] >= 0.0 && p_high[i] <= 1.0)) throw PreconditionError("threshold: probabilities must lie in [0, 1]");
    pos += labels[i] == 1;
  }
  if (pos == 0 || pos == labels.size()) throw PreconditionError("threshold: labels contain a single class");

  ThresholdResult r;
  for (int i = 1; i <= 99; ++i) {
    const double t = i / 100.0;
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const bool predicted = p_high[k] >= t;
      if (predicted && labels[k] == 1) ++tp;
      else if (predicted) ++fp;
      else if (labels[k] == 1) ++fn;
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    const double f1 = denom > 0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
    r.curve.emplace_back(t, f1);
    if (i == 1 || f1 > r.f1) {
      r.f1 = f1;
      r.threshold = t;
    }
  }
  return r;
}

}  // namespace bushfire
