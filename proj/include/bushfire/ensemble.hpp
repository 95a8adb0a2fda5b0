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

// Stacked generalization, randomized hyperparameter search and decision
// threshold selection.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bushfire/logistic.hpp"
#include "bushfire/model.hpp"
#include "bushfire/random.hpp"
#include "bushfire/resample.hpp"

namespace bushfire {

// Fold id in [0, k) per row. Each class is shuffled and dealt round-robin,
// continuing from where the previous class stopped, so per-class and total
// fold sizes differ by at most one.
std::vector<int> stratified_kfold(const Labels& y, int k, std::uint64_t seed);

// Predicts the training class frequencies for every row.
class PriorClassifier final : public Classifier {
 public:
  static PriorClassifier fit(const Labels& y, int n_classes = 0);

  std::string family() const override { return "majority"; }
  int n_classes() const override { return static_cast<int>(prior_.size()); }
  Matrix predict_proba(const Matrix& x) const override;
  Json hyperparameters() const override { return Json::object(); }
  Json parameters() const override { return Json{{"prior", prior_}}; }
  static std::shared_ptr<PriorClassifier> from_json(const Json& params);

 private:
  std::vector<double> prior_;
};

// A learner family plus overrides of its default hyperparameters.
// Families: tree, forest, gbdt, logistic, mlp, majority.
struct LearnerSpec {
  std::string family;
  Json params = Json::object();
};

// `seed` and `threads` override whatever the params say.
ClassifierPtr fit_learner(const LearnerSpec& spec, const Matrix& x, const Labels& y, int n_classes,
                          std::uint64_t seed, int threads);

struct StackConfig {
  std::vector<LearnerSpec> base = {{"forest", Json::object()}, {"gbdt", Json{{"growth", "leaf_wise"}}}};
  LogisticParams meta{};
  int n_folds = 5;
  std::optional<ResampleConfig> resample;  // applied to training folds only
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
  Json to_json() const;
};

class StackedModel final : public Classifier {
 public:
  StackedModel(std::vector<ClassifierPtr> base, LogisticRegression meta, Json config);

  std::string family() const override { return "stack"; }
  int n_classes() const override { return meta_.n_classes(); }
  Matrix predict_proba(const Matrix& x) const override;
  Json hyperparameters() const override { return config_; }
  Json parameters() const override;
  std::vector<std::string> warnings() const override;
  static std::shared_ptr<StackedModel> from_json(const Json& hyper, const Json& params);

  // Base-learner probabilities without the first class column.
  Matrix meta_features(const Matrix& x) const;
  const std::vector<ClassifierPtr>& base() const { return base_; }
  const LogisticRegression& meta() const { return meta_; }

 private:
  std::vector<ClassifierPtr> base_;
  LogisticRegression meta_;
  Json config_;
};

Matrix drop_first_class(const Matrix& proba);

struct StackFit {
  std::shared_ptr<const StackedModel> model;
  std::vector<int> folds;             // fold id per training row
  std::vector<Indices> trained_on;    // per fold: rows its base models saw
  Matrix oof_meta;                    // out-of-fold meta-features
  // Meta-learner probabilities for each row from a meta model that did not
  // see that row's fold; used for threshold selection.
  Matrix oof_proba;
  std::vector<std::string> audit;
};

StackFit fit_stack(const Matrix& x, const Labels& y, const StackConfig& config, int n_classes = 0);

enum class Scoring { kMacroF1, kHighRecall, kAccuracy };

std::string_view to_string(Scoring s);
Scoring parse_scoring(std::string_view s);

// Score of predictions under a scoring rule; "high" is the last class.
double score_predictions(const Labels& truth, const Labels& predicted, int n_classes, Scoring scoring);

struct Distribution {
  enum class Kind { kChoice, kUniform, kLogUniform, kIntUniform };
  Kind kind = Kind::kChoice;
  std::vector<Json> choices;
  double low = 0.0;
  double high = 0.0;

  static Distribution choice(std::vector<Json> values);
  static Distribution uniform(double low, double high);
  static Distribution log_uniform(double low, double high);
  static Distribution int_uniform(int low, int high);  // inclusive

  Json sample(Rng& rng) const;
};

struct SearchSpec {
  std::map<std::string, Distribution> space;  // sampled in key order
  int n_iter = 20;
  int n_folds = 3;
  Scoring scoring = Scoring::kMacroF1;
  std::optional<ResampleConfig> resample;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct SearchRow {
  Json params;
  std::vector<double> fold_scores;
  double mean_score = 0.0;
};

struct SearchResult {
  Json best_params;
  double best_score = 0.0;
  std::size_t best_index = 0;
  std::vector<SearchRow> table;

  std::string to_csv() const;
};

// Samples spec.n_iter parameter sets, merges each over `base.params` and
// scores it by stratified k-fold CV. Ties go to the first sampled set.
SearchResult random_search(const Matrix& x, const Labels& y, const LearnerSpec& base, const SearchSpec& spec,
                           int n_classes = 0);

struct ThresholdResult {
  double threshold = 0.5;
  double f1 = 0.0;
  std::vector<std::pair<double, double>> curve;  // (threshold, F1)

  std::string to_csv() const;
};

// Grid t = i/100, i = 1..99; predicts positive when p >= t and keeps the
// best positive-class F1, ties to the lower threshold. Choosing a threshold
// on the test role raises LeakageError.
ThresholdResult optimize_threshold(std::span<const double> p_high, const Labels& labels,
                                   DataRole role = DataRole::kValidation);

}  // namespace bushfire
