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

#include "bushfire/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "bushfire/text.hpp"
#include "json.hpp"

namespace bushfire {

CountMatrix confusion(const Labels& truth, const Labels& predicted, int n_classes) {
  if (truth.size() != predicted.size())
    throw PreconditionError("confusion: " + std::to_string(truth.size()) + " labels but " +
                            std::to_string(predicted.size()) + " predictions");
  CountMatrix cm = CountMatrix::Zero(n_classes, n_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= n_classes || predicted[i] < 0 || predicted[i] >= n_classes)
      throw PreconditionError("confusion: class index out of range");
    ++cm(truth[i], predicted[i]);
  }
  return cm;
}

Matrix row_percentages(const CountMatrix& cm) {
  Matrix out = Matrix::Zero(cm.rows(), cm.cols());
  for (Eigen::Index i = 0; i < cm.rows(); ++i) {
    const auto total = cm.row(i).sum();
    if (total == 0) continue;
    for (Eigen::Index j = 0; j < cm.cols(); ++j)
      out(i, j) = 100.0 * static_cast<double>(cm(i, j)) / static_cast<double>(total);
  }
  return out;
}

ClassificationReport classification_report(const CountMatrix& cm, const std::vector<std::string>& class_names) {
  const auto k = cm.rows();
  if (cm.cols() != k || static_cast<Eigen::Index>(class_names.size()) != k)
    throw PreconditionError("report: class list does not match the confusion matrix");
  ClassificationReport r;
  r.class_names = class_names;
  r.confusion = cm;
  r.normalized = row_percentages(cm);
  const auto total = cm.sum();
  std::int64_t correct = 0;
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto tp = cm(c, c);
    const auto predicted = cm.col(c).sum();
    const auto support = cm.row(c).sum();
    ClassScores s;
    s.support = support;
    s.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    s.recall = support ? static_cast<double>(tp) / static_cast<double>(support) : 0.0;
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    if (!predicted || !support) r.zero_division.push_back(class_names[static_cast<std::size_t>(c)]);
    correct += tp;
    r.per_class.push_back(s);
  }
  r.accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  r.macro.support = r.weighted.support = total;
  for (const auto& s : r.per_class) {
    r.macro.precision += s.precision / static_cast<double>(k);
    r.macro.recall += s.recall / static_cast<double>(k);
    r.macro.f1 += s.f1 / static_cast<double>(k);
    if (total) {
      const double w = static_cast<double>(s.support) / static_cast<double>(total);
      r.weighted.precision += w * s.precision;
      r.weighted.f1 += w * s.f1;
    }
  }
  // Support-weighted recall telescopes to trace / total.
  r.weighted.recall = r.accuracy;
  return r;
}

ClassificationReport classification_report(const Labels& truth, const Labels& predicted,
                                           const std::vector<std::string>& class_names) {
  return classification_report(confusion(truth, predicted, static_cast<int>(class_names.size())), class_names);
}

std::string report_json(const ClassificationReport& r) {
  using OJson = nlohmann::ordered_json;
  auto scores = [](const ClassScores& s) {
    return OJson{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
  };
  OJson per_class = OJson::object();
  for (std::size_t c = 0; c < r.per_class.size(); ++c) per_class[r.class_names[c]] = scores(r.per_class[c]);
  OJson cm = OJson::array(), norm = OJson::array();
  for (Eigen::Index i = 0; i < r.confusion.rows(); ++i) {
    OJson row = OJson::array(), nrow = OJson::array();
    for (Eigen::Index j = 0; j < r.confusion.cols(); ++j) {
      row.push_back(r.confusion(i, j));
      nrow.push_back(r.normalized(i, j));
    }
    cm.push_back(row);
    norm.push_back(nrow);
  }
  OJson j{{"classes", r.class_names},       {"per_class", per_class},       {"accuracy", r.accuracy},
          {"macro_avg", scores(r.macro)},  {"weighted_avg", scores(r.weighted)}, {"confusion", cm},
          {"confusion_row_percent", norm}, {"zero_division_as_zero", r.zero_division}};
  return j.dump(2) + "\n";
}

std::string report_table(const ClassificationReport& r) {
  std::size_t width = 12;
  for (const auto& n : r.class_names) width = std::max(width, n.size());
  std::ostringstream ss;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%*s %10s %10s %10s %10s\n\n", static_cast<int>(width), "", "precision", "recall",
                "f1-score", "support");
  ss << buf;
  auto line = [&](const std::string& name, const ClassScores& s) {
    std::snprintf(buf, sizeof buf, "%*s %10.4f %10.4f %10.4f %10lld\n", static_cast<int>(width), name.c_str(),
                  s.precision, s.recall, s.f1, static_cast<long long>(s.support));
    ss << buf;
  };
  for (std::size_t c = 0; c < r.per_class.size(); ++c) line(r.class_names[c], r.per_class[c]);
  ss << '\n';
  std::snprintf(buf, sizeof buf, "%*s %10s %10s %10.4f %10lld\n", static_cast<int>(width), "accuracy", "", "",
                r.accuracy, static_cast<long long>(r.macro.support));
  ss << buf;
  line("macro avg", r.macro);
  line("weighted avg", r.weighted);
  if (!r.zero_division.empty()) {
    ss << "\nundefined metrics reported as 0 for:";
    for (const auto& n : r.zero_division) ss << ' ' << n;
    ss << '\n';
  }
  return ss.str();
}

std::string confusion_csv(const ClassificationReport& r) {
  std::ostringstream ss;
  ss << "true\\predicted";
  for (const auto& n : r.class_names) ss << ',' << n;
  for (const auto& n : r.class_names) ss << ',' << n << "_row_pct";
  ss << '\n';
  for (Eigen::Index i = 0; i < r.confusion.rows(); ++i) {
    ss << r.class_names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < r.confusion.cols(); ++j) ss << ',' << r.confusion(i, j);
    for (Eigen::Index j = 0; j < r.confusion.cols(); ++j) ss << ',' << format_double(r.normalized(i, j));
    ss << '\n';
  }
  return ss.str();
}

namespace {

void check_binary(std::span<const double> scores, const Labels& labels, std::size_t& n_pos, std::size_t& n_neg) {
  if (scores.size() != labels.size()) throw PreconditionError("roc: score/label count mismatch");
  n_pos = n_neg = 0;
  for (int v : labels) {
    if (v == 1)
      ++n_pos;
    else if (v == 0)
      ++n_neg;
    else
      throw PreconditionError("roc: labels must be 0/1");
  }
  if (!n_pos || !n_neg) throw PreconditionError("roc: both classes must be present");
}

}  // namespace

double roc_auc(std::span<const double> scores, const Labels& labels) {
  std::size_t n_pos, n_neg;
  check_binary(scores, labels, n_pos, n_neg);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of midranks (doubled to stay integral) over positives.
  double rank_sum2 = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid2 = static_cast<double>(i + 1 + j);  // 2 * mean of ranks i+1..j
    for (std::size_t m = i; m < j; ++m)
      if (labels[order[m]] == 1) rank_sum2 += mid2;
    i = j;
  }
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  const double u = rank_sum2 / 2.0 - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

RocCurve roc_curve(std::span<const double> scores, const Labels& labels) {
  std::size_t n_pos, n_neg;
  check_binary(scores, labels, n_pos, n_neg);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  RocCurve c;
  c.threshold.push_back(std::numeric_limits<double>::infinity());
  c.fpr.push_back(0.0);
  c.tpr.push_back(0.0);
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? tp : fp) += 1;
      ++j;
    }
    c.threshold.push_back(scores[order[i]]);
    c.fpr.push_back(static_cast<double>(fp) / static_cast<double>(n_neg));
    c.tpr.push_back(static_cast<double>(tp) / static_cast<double>(n_pos));
    i = j;
  }
  return c;
}

std::string RocCurve::to_csv() const {
  std::ostringstream ss;
  ss << "threshold,fpr,tpr\n";
  for (std::size_t i = 0; i < threshold.size(); ++i)
    ss << format_double(threshold[i]) << ',' << format_double(fpr[i]) << ',' << format_double(tpr[i]) << '\n';
  return ss.str();
}

Vector vif(const Matrix& x) {
  const auto n = x.rows(), d = x.cols();
  if (d < 2) throw PreconditionError("vif: need at least two columns");
  if (n <= d) throw PreconditionError("vif: need more rows than columns");
  Vector out(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const Vector target = x.col(j);
    const double mean = target.mean();
    const double sst = (target.array() - mean).square().sum();
    if (!(sst > 0.0)) {
      out(j) = kVifInfinity;
      continue;
    }
    Matrix design(n, d);
    design.col(0).setOnes();
    for (Eigen::Index c = 0, k = 1; c < d; ++c)
      if (c != j) design.col(k++) = x.col(c);
    const Vector beta = design.colPivHouseholderQr().solve(target);
    const double ssr = (target - design * beta).squaredNorm();
    const double r2 = 1.0 - ssr / sst;
    out(j) = r2 >= 1.0 - 1e-12 ? kVifInfinity : 1.0 / (1.0 - r2);
  }
  return out;
}

Correlation correlation_matrix(const Matrix& x) {
  if (x.rows() < 2) throw PreconditionError("correlation: need at least two rows");
  const auto d = x.cols();
  const Matrix centered = x.rowwise() - x.colwise().mean();
  Correlation c;
  c.r = Matrix::Identity(d, d);
  c.constant.assign(static_cast<std::size_t>(d), false);
  Vector norm(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    norm(j) = centered.col(j).norm();
    c.constant[static_cast<std::size_t>(j)] = !(norm(j) > 0.0);
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      double v = 0.0;
      if (!c.constant[static_cast<std::size_t>(i)] && !c.constant[static_cast<std::size_t>(j)])
        v = std::clamp(centered.col(i).dot(centered.col(j)) / (norm(i) * norm(j)), -1.0, 1.0);
      c.r(i, j) = c.r(j, i) = v;
    }
  }
  return c;
}

std::string matrix_csv(const Matrix& m, const std::vector<std::string>& names) {
  std::ostringstream ss;
  ss << "feature";
  for (const auto& n : names) ss << ',' << n;
  ss << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ss << names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) ss << ',' << format_double(m(i, j));
    ss << '\n';
  }
  return ss.str();
}

std::string vif_csv(const Vector& v, const std::vector<std::string>& names) {
  std::ostringstream ss;
  ss << "feature,vif\n";
  for (Eigen::Index i = 0; i < v.size(); ++i)
    ss << names[static_cast<std::size_t>(i)] << ',' << format_double(v(i)) << '\n';
  return ss.str();
}

std::string correlation_svg(const Correlation& c, const std::vector<std::string>& names) {
  const int cell = 36, label = 130;
  const auto d = static_cast<int>(c.r.rows());
  const int size = label + cell * d + 10;
  std::ostringstream ss;
  ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int i = 0; i < d; ++i) {
    const auto& name = names[static_cast<std::size_t>(i)];
    ss << "<text x=\"" << label - 4 << "\" y=\"" << label + cell * i + cell / 2 + 3
       << "\" text-anchor=\"end\">" << name << "</text>\n";
    ss << "<text transform=\"translate(" << label + cell * i + cell / 2 + 3 << ',' << label - 4
       << ") rotate(-90)\">" << name << "</text>\n";
  }
  char fill[8];
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double v = c.r(i, j);
      // White at 0, saturating to red (+1) or blue (-1).
      const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(v))));
      if (v >= 0)
        std::snprintf(fill, sizeof fill, "#ff%02x%02x", fade, fade);
      else
        std::snprintf(fill, sizeof fill, "#%02x%02xff", fade, fade);
      char value[16];
      std::snprintf(value, sizeof value, "%.2f", v);
      ss << "<rect x=\"" << label + cell * j << "\" y=\"" << label + cell * i << "\" width=\"" << cell
         << "\" height=\"" << cell << "\" fill=\"" << fill << "\" stroke=\"#888\"/>"
         << "<text x=\"" << label + cell * j + cell / 2 << "\" y=\"" << label + cell * i + cell / 2 + 3
         << "\" text-anchor=\"middle\">" << value << "</text>\n";
    }
  }
  ss << "</svg>\n";
  return ss.str();
}

}  // namespace bushfire
