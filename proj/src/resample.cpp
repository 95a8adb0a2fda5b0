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

#include "bushfire/resample.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bushfire/kdtree.hpp"
#include "bushfire/parallel.hpp"
#include "bushfire/random.hpp"

namespace bushfire {

std::string_view to_string(TomekPolicy p) {
  return p == TomekPolicy::kRemoveBoth ? "remove-both" : "remove-majority-only";
}

TomekPolicy parse_tomek_policy(std::string_view s) {
  if (s == "remove-both") return TomekPolicy::kRemoveBoth;
  if (s == "remove-majority-only") return TomekPolicy::kRemoveMajorityOnly;
  throw PreconditionError("unknown tomek policy \"" + std::string(s) +
                          "\" (expected remove-majority-only or remove-both)");
}

void ResampleConfig::validate() const {
  if (k_neighbors < 1) throw PreconditionError("resample: k_neighbors must be >= 1");
  if (!(target_ratio > 0.0 && target_ratio <= 1.0))
    throw PreconditionError("resample: target_ratio must be in (0, 1]");
}

namespace {

int majority_class(const std::vector<std::size_t>& counts) {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

}  // namespace

Resampled smote(const Matrix& x, const Labels& y, const ResampleConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw PreconditionError("smote: row/label count mismatch");
  const int n_classes = count_classes(y);
  const auto counts = class_counts(y, n_classes);
  const int majority = majority_class(counts);
  const auto target = static_cast<std::size_t>(
      std::ceil(config.target_ratio * static_cast<double>(counts[static_cast<std::size_t>(majority)])));

  struct Plan {
    int cls;
    Indices members;
    std::size_t to_make;
  };
  std::vector<Plan> plans;
  std::size_t total_new = 0;
  for (int c = 0; c < n_classes; ++c) {
    const std::size_t have = counts[static_cast<std::size_t>(c)];
    if (c == majority || have == 0 || have >= target) continue;
    if (have <= static_cast<std::size_t>(config.k_neighbors))
      throw PreconditionError("smote: class " + std::to_string(c) + " has " + std::to_string(have) +
                              " rows, which is not more than k_neighbors=" +
                              std::to_string(config.k_neighbors) + "; use a smaller k");
    Plan p{c, {}, target - have};
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] == c) p.members.push_back(i);
    total_new += p.to_make;
    plans.push_back(std::move(p));
  }

  Resampled out;
  out.x.resize(x.rows() + static_cast<Eigen::Index>(total_new), x.cols());
  out.x.topRows(x.rows()) = x;
  out.y = y;
  out.y.reserve(y.size() + total_new);

  Eigen::Index next = x.rows();
  const auto k = static_cast<std::size_t>(config.k_neighbors);
  for (const auto& plan : plans) {
    const Matrix members = take_rows(x, plan.members);
    const KdTree tree(members);
    std::vector<std::vector<std::size_t>> neighbors(plan.members.size());
    parallel_for(plan.members.size(), config.threads, [&](std::size_t i) {
      for (const auto& hit : tree.knn_of_row(i, k)) neighbors[i].push_back(hit.second);
    });
    // One sequential draw stream per class keeps the output independent of
    // the thread count.
    Rng rng(derive_seed(config.seed, 0x53u, static_cast<std::uint64_t>(plan.cls)));
    for (std::size_t s = 0; s < plan.to_make; ++s) {
      const std::size_t base = rng.below(plan.members.size());
      const auto& nn = neighbors[base];
      const std::size_t other = nn[rng.below(nn.size())];
      const double u = rng.uniform();
      const auto row_b = members.row(static_cast<Eigen::Index>(base));
      const auto row_o = members.row(static_cast<Eigen::Index>(other));
      out.x.row(next++) = row_b + u * (row_o - row_b);
      out.y.push_back(plan.cls);
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> tomek_links(const Matrix& x, const Labels& y,
                                                             int threads) {
  std::vector<std::pair<std::size_t, std::size_t>> links;
  const std::size_t n = y.size();
  if (n < 2) return links;
  const KdTree tree(x);
  std::vector<std::size_t> nearest(n);
  parallel_for(n, threads, [&](std::size_t i) { nearest[i] = tree.knn_of_row(i, 1).front().second; });
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = nearest[i];
    if (i < j && nearest[j] == i && y[i] != y[j]) links.emplace_back(i, j);
  }
  return links;
}

Resampled remove_tomek_links(const Matrix& x, const Labels& y, TomekPolicy policy, int majority,
                             int threads, int* passes) {
  Resampled cur{x, y};
  int pass_count = 0;
  for (;;) {
    const auto links = tomek_links(cur.x, cur.y, threads);
    std::vector<bool> drop(cur.y.size(), false);
    std::size_t dropped = 0;
    for (auto [i, j] : links) {
      for (std::size_t m : {i, j}) {
        if (policy == TomekPolicy::kRemoveBoth || cur.y[m] == majority) {
          dropped += drop[m] ? 0 : 1;
          drop[m] = true;
        }
      }
    }
    ++pass_count;
    if (dropped == 0) break;
    Indices keep;
    keep.reserve(cur.y.size() - dropped);
    for (std::size_t i = 0; i < cur.y.size(); ++i)
      if (!drop[i]) keep.push_back(i);
    cur = Resampled{take_rows(cur.x, keep), take(cur.y, keep)};
  }
  if (passes) *passes = pass_count;
  return cur;
}

Resampled smote_tomek(const Matrix& x, const Labels& y, const ResampleConfig& config,
                      ResampleSummary* summary) {
  const int n_classes = count_classes(y);
  const auto before = class_counts(y, n_classes);
  const int majority = majority_class(before);
  Resampled over = smote(x, y, config);
  int passes = 0;
  Resampled cleaned =
      remove_tomek_links(over.x, over.y, config.tomek_policy, majority, config.threads, &passes);
  if (summary) {
    summary->before = before;
    summary->after_smote = class_counts(over.y, n_classes);
    summary->after_tomek = class_counts(cleaned.y, n_classes);
    summary->tomek_passes = passes;
  }
  return cleaned;
}

std::string ResampleSummary::to_string(const std::vector<std::string>& class_names) const {
  std::ostringstream ss;
  auto dump = [&](const char* stage, const std::vector<std::size_t>& c) {
    ss << stage << ":";
    for (std::size_t i = 0; i < c.size(); ++i)
      ss << ' ' << (i < class_names.size() ? class_names[i] : std::to_string(i)) << '=' << c[i];
    ss << '\n';
  };
  dump("before", before);
  dump("after_smote", after_smote);
  dump("after_tomek", after_tomek);
  ss << "tomek_passes: " << tomek_passes << '\n';
  return ss.str();
}

}  // namespace bushfire
