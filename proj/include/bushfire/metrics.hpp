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

// Classification metrics, ROC analysis and multicollinearity diagnostics.

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bushfire/common.hpp"

namespace bushfire {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// (i, j): samples of true class i predicted as j.
CountMatrix confusion(const Labels& truth, const Labels& predicted, int n_classes);

// Rows scaled to percentages; rows of absent classes stay zero.
Matrix row_percentages(const CountMatrix& cm);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct ClassificationReport {
  std::vector<std::string> class_names;
  std::vector<ClassScores> per_class;
  double accuracy = 0.0;
  ClassScores macro;
  ClassScores weighted;
  CountMatrix confusion;
  Matrix normalized;
  // Classes whose precision (nothing predicted) or recall (no support) was
  // undefined and reported as 0.
  std::vector<std::string> zero_division;
};

ClassificationReport classification_report(const CountMatrix& cm, const std::vector<std::string>& class_names);
ClassificationReport classification_report(const Labels& truth, const Labels& predicted,
                                           const std::vector<std::string>& class_names);

std::string report_json(const ClassificationReport& r);
// Aligned columns: class, precision, recall, f1-score, support.
std::string report_table(const ClassificationReport& r);
std::string confusion_csv(const ClassificationReport& r);

// Mann-Whitney probability that a positive outscores a negative, ties
// counted one half. Labels are 0/1.
double roc_auc(std::span<const double> scores, const Labels& labels);

struct RocCurve {
  std::vector<double> threshold;  // descending; the first is +inf
  std::vector<double> fpr;
  std::vector<double> tpr;

  std::string to_csv() const;
};

RocCurve roc_curve(std::span<const double> scores, const Labels& labels);

inline constexpr double kVifInfinity = std::numeric_limits<double>::infinity();

// VIF_j = 1 / (1 - R^2_j), regressing column j on the others plus an
// intercept. Exact collinearity gives kVifInfinity.
Vector vif(const Matrix& x);

struct Correlation {
  Matrix r;
  std::vector<bool> constant;  // constant columns: zero off-diagonal
};

Correlation correlation_matrix(const Matrix& x);

std::string matrix_csv(const Matrix& m, const std::vector<std::string>& names);
std::string vif_csv(const Vector& v, const std::vector<std::string>& names);
// Heat grid of the correlation matrix, blue (-1) to red (+1).
std::string correlation_svg(const Correlation& c, const std::vector<std::string>& names);

}  // namespace bushfire
