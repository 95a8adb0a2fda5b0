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


#include <gtest/gtest.h>

#include <cmath>

#include "bushfire/kdtree.hpp"
#include "bushfire/random.hpp"
#include "bushfire/resample.hpp"
#include "oracles.hpp"

using namespace bushfire;

namespace {

struct Problem {
  Matrix x;
  Labels y;
};

Problem imbalanced(std::uint64_t seed, int n, double ratio, int d = 3) {
  Rng rng(seed);
  Problem p{Matrix(n, d), Labels(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    const int c = rng.uniform() < ratio ? 1 : 0;
    p.y[static_cast<std::size_t>(i)] = c;
    for (int j = 0; j < d; ++j) p.x(i, j) = rng.normal(c * 1.2, 1.0);
  }
  return p;
}

}  // namespace

TEST(KdTree, MatchesBruteForce) {
  Rng rng(3);
  Matrix pts(500, 4);
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = std::round(rng.normal(0, 3));  // many ties
  const KdTree tree(pts, 8);
  for (std::size_t q = 0; q < 100; ++q) {
    std::vector<KdTree::Hit> all;
    for (std::size_t i = 0; i < 500; ++i)
      if (i != q) all.push_back({(pts.row(Eigen::Index(i)) - pts.row(Eigen::Index(q))).squaredNorm(), i});
    std::sort(all.begin(), all.end());
    all.resize(7);
    EXPECT_EQ(tree.knn_of_row(q, 7), all);
  }
}

TEST(Smote, MinorityReachesTargetCount) {
  for (double ratio : {0.5, 1.0}) {
    const auto p = imbalanced(1, 400, 0.1);
    const auto counts = class_counts(p.y, 2);
    const auto out = smote(p.x, p.y, {.k_neighbors = 5, .target_ratio = ratio, .seed = 4});
    const auto after = class_counts(out.y, 2);
    EXPECT_EQ(after[1], static_cast<std::size_t>(std::ceil(ratio * double(counts[0]))));
    EXPECT_EQ(after[0], counts[0]);
    EXPECT_EQ(out.x.topRows(p.x.rows()), p.x);
  }
}

TEST(Smote, SyntheticRowsAreConvexCombinations) {
  const auto p = imbalanced(2, 200, 0.15);
  Indices minority;
  for (std::size_t i = 0; i < p.y.size(); ++i)
    if (p.y[i] == 1) minority.push_back(i);
  const Matrix pool = take_rows(p.x, minority);
  const auto out = smote(p.x, p.y, {.k_neighbors = 3, .seed = 9});
  for (Eigen::Index r = p.x.rows(); r < out.x.rows(); ++r)
    EXPECT_LE(oracle::segment_residual(out.x.row(r), pool), 1e-9);
}

TEST(Smote, ThreeClassGrowsEveryMinorityClass) {
  Rng rng(5);
  Matrix x(300, 2);
  Labels y(300);
  for (int i = 0; i < 300; ++i) {
    y[std::size_t(i)] = i < 240 ? 0 : (i < 280 ? 1 : 2);
    x.row(i) << rng.normal(y[std::size_t(i)], 1), rng.normal(0, 1);
  }
  const auto out = smote(x, y, {.k_neighbors = 5, .target_ratio = 0.5, .seed = 1});
  const auto c = class_counts(out.y, 3);
  EXPECT_EQ(c[1], 120u);
  EXPECT_EQ(c[2], 120u);
}

TEST(Smote, TooFewMinorityRowsIsPreconditionError) {
  Matrix x = Matrix::Random(10, 2);
  Labels y = {0, 0, 0, 0, 0, 0, 0, 1, 1, 1};
  EXPECT_THROW(smote(x, y, {.k_neighbors = 3}), PreconditionError);
  EXPECT_THROW(smote(x, y, {.k_neighbors = 1, .target_ratio = 1.5}), PreconditionError);
}

TEST(Tomek, LinksMatchBruteForce) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto p = imbalanced(s, 150, 0.3, 2);
    EXPECT_EQ(tomek_links(p.x, p.y).size(), oracle::count_tomek_links(p.x, p.y));
  }
}

TEST(Tomek, RemoveBothLeavesNoLinks) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto p = imbalanced(s + 100, 300, 0.3, 2);
    int passes = 0;
    const auto out = remove_tomek_links(p.x, p.y, TomekPolicy::kRemoveBoth, 0, 1, &passes);
    EXPECT_EQ(oracle::count_tomek_links(out.x, out.y), 0u);
    EXPECT_GE(passes, 1);
  }
}

TEST(Tomek, MajorityOnlyKeepsMinority) {
  const auto p = imbalanced(42, 300, 0.2, 2);
  const auto out = remove_tomek_links(p.x, p.y, TomekPolicy::kRemoveMajorityOnly, 0);
  EXPECT_EQ(class_counts(out.y, 2)[1], class_counts(p.y, 2)[1]);
  EXPECT_EQ(oracle::count_tomek_links(out.x, out.y), 0u);
}

TEST(SmoteTomek, DeterministicAcrossThreadCounts) {
  const auto p = imbalanced(7, 800, 0.08);
  ResampleConfig a{.k_neighbors = 5, .target_ratio = 1.0, .tomek_policy = TomekPolicy::kRemoveBoth, .seed = 3,
                   .threads = 1};
  ResampleConfig b = a;
  b.threads = 8;
  ResampleSummary sa, sb;
  const auto ra = smote_tomek(p.x, p.y, a, &sa);
  const auto rb = smote_tomek(p.x, p.y, b, &sb);
  EXPECT_EQ(ra.x, rb.x);
  EXPECT_EQ(ra.y, rb.y);
  EXPECT_EQ(sa.to_string({"low", "high"}), sb.to_string({"low", "high"}));
  EXPECT_EQ(sa.after_smote[1], sa.after_smote[0]);
}

TEST(TomekPolicy, ParseNames) {
  EXPECT_EQ(parse_tomek_policy("remove-both"), TomekPolicy::kRemoveBoth);
  EXPECT_EQ(to_string(parse_tomek_policy("remove-majority-only")), "remove-majority-only");
  EXPECT_THROW(parse_tomek_policy("both"), PreconditionError);
}
