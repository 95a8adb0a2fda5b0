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
#include <numbers>

#include "bushfire/features.hpp"
#include "bushfire/random.hpp"
#include "bushfire/synth.hpp"

using namespace bushfire;

TEST(MonthEncoding, ClosedFormAtQuarterPoints) {
  EXPECT_EQ(encode_month(3), std::make_pair(1.0, 0.0));
  EXPECT_EQ(encode_month(6), std::make_pair(0.0, -1.0));
  EXPECT_EQ(encode_month(12), std::make_pair(0.0, 1.0));
  EXPECT_EQ(encode_month(9), std::make_pair(-1.0, 0.0));
}

TEST(MonthEncoding, OnUnitCircle) {
  for (int m = 1; m <= 12; ++m) {
    const auto [s, c] = encode_month(m);
    EXPECT_NEAR(s, std::sin(2 * std::numbers::pi * m / 12), 1e-15);
    EXPECT_NEAR(c, std::cos(2 * std::numbers::pi * m / 12), 1e-15);
  }
  EXPECT_THROW(encode_month(0), PreconditionError);
  EXPECT_THROW(encode_month(13), PreconditionError);
}

TEST(Labels, BoundaryGoesLow) {
  const auto two = LabelScheme::two_class();
  EXPECT_EQ(label(40.0, two), 0);
  EXPECT_EQ(label(40.01, two), 1);
  const auto three = LabelScheme::three_class();
  EXPECT_EQ(label(40.0, three), 0);
  EXPECT_EQ(label(100.0, three), 1);
  EXPECT_EQ(label(100.5, three), 2);
  EXPECT_THROW((LabelScheme{LabelMode::kThreeClass, {100.0, 40.0}, {"a", "b", "c"}}.validate()),
               PreconditionError);
}

TEST(Quantile, LinearInterpolation) {
  const std::vector<double> v = {4, 1, 3, 2};
  EXPECT_EQ(quantile_linear(v, 0.0), 1.0);
  EXPECT_EQ(quantile_linear(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_linear(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_linear(v, 0.99), 3.97);
}

TEST(Capping, Idempotent) {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(1 + rng.below(400));
    for (auto& x : v) x = rng.exponential(50);
    const auto once = cap_percentile(v, 0.99);
    EXPECT_EQ(apply_cap(once.values, once.cap), once.values);
    for (double x : once.values) EXPECT_LE(x, once.cap);
  }
}

TEST(Capping, WorkedExample) {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[std::size_t(i)] = i + 1;
  const auto c = cap_percentile(v, 0.99);
  EXPECT_NEAR(c.cap, 99.01, 1e-12);
  for (int i = 0; i < 99; ++i) EXPECT_EQ(c.values[std::size_t(i)], i + 1);
  EXPECT_EQ(c.values[99], c.cap);
}

TEST(Capping, RefittingOnCappedDataLowersTheCap) {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[std::size_t(i)] = i + 1;
  const auto once = cap_percentile(v, 0.99);
  EXPECT_LT(cap_percentile(once.values, 0.99).cap, once.cap);
}

TEST(Engineer, KnownRecord) {
  FusedRecord r;
  r.event.date = parse_date("2019-12-15").value();
  r.region = Region::VIC;
  r.weather = {10, 30, 20, 2, 15};
  r.ndvi = 0.5;
  r.distance_m = 1234;
  const auto v = engineer_raw(r);
  const auto names = feature_names();
  ASSERT_EQ(v.size(), static_cast<Eigen::Index>(names.size()));
  EXPECT_EQ(v(0), 20.0);    // diurnal range
  EXPECT_EQ(v(2), 0.0);     // sin for December
  EXPECT_EQ(v(3), 1.0);
  EXPECT_EQ(v(5), 30.0);    // wspd * prcp
  EXPECT_EQ(v(6), 1.0);     // ndvi * prcp
  EXPECT_EQ(v(7), 40.0);    // range * prcp
  EXPECT_EQ(v(10), 1.0);    // region_VIC
  EXPECT_EQ(v.segment(8, 5).sum(), 1.0);
  EXPECT_EQ(v(13), 1234.0);
  EXPECT_EQ(engineer_raw(r, {.raw_weather = true}).size(), v.size() + 4);
}

TEST(Engineer, UnlistedRegionsAreAllZero) {
  FusedRecord r;
  r.event.date = parse_date("2019-01-15").value();
  r.region = Region::NSW;
  EXPECT_EQ(engineer_raw(r).segment(8, 5).sum(), 0.0);
}

TEST(Scaler, FitOnTrainOnlyAndInvertible) {
  Rng rng(1);
  Matrix x(100, 3);
  for (Eigen::Index i = 0; i < x.rows(); ++i) x.row(i) << rng.normal(5, 2), double(i % 2), 7.0;
  const auto s = fit_scaler(x, {"a", "region_b", "c"}, {true, false, true});
  const Matrix z = s.apply(x);
  EXPECT_NEAR(z.col(0).mean(), 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(z.col(0).array().square().mean()), 1.0, 1e-12);
  EXPECT_EQ(z.col(1), x.col(1));
  EXPECT_EQ(z.col(2), x.col(2));  // constant: passed through with a warning
  EXPECT_EQ(s.warnings.size(), 1u);
  EXPECT_LT((s.invert(z) - x).cwiseAbs().maxCoeff(), 1e-12);
  const auto back = Scaler::from_json(s.to_json());
  EXPECT_EQ(back.apply(x), z);
}

TEST(Split, StratifiedAndDisjoint) {
  Labels y;
  for (int i = 0; i < 1000; ++i) y.push_back(i % 20 == 0 ? 1 : 0);
  const auto s = stratified_split(y, {0.2, 3});
  EXPECT_EQ(s.train.size() + s.test.size(), y.size());
  Indices all = s.train;
  all.insert(all.end(), s.test.begin(), s.test.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
  const auto test_pos = std::count_if(s.test.begin(), s.test.end(), [&](std::size_t i) { return y[i] == 1; });
  EXPECT_EQ(test_pos, 10);
  EXPECT_EQ(s.test.size(), 200u);
  EXPECT_EQ(stratified_split(y, {0.2, 3}).test, s.test);
  EXPECT_NE(stratified_split(y, {0.2, 4}).test, s.test);
}

TEST(Split, ClassWithOneRowIsRejected) {
  EXPECT_THROW(stratified_split({0, 0, 0, 1}, {0.2, 0}), PreconditionError);
}

TEST(Featurize, ScalerSeesOnlyTrainRows) {
  const auto synth = synth_fused({.rows = 400, .ratio = 0.2, .signal = 1.0, .seed = 2});
  const auto out = featurize(synth.records, {});
  // Recompute the raw train matrix and check the stored scaler against it.
  Matrix raw(static_cast<Eigen::Index>(synth.records.size()), out.train.x.cols());
  for (std::size_t i = 0; i < synth.records.size(); ++i)
    raw.row(static_cast<Eigen::Index>(i)) = engineer_raw(synth.records[i]);
  const auto parts = stratified_split([&] {
    Labels y;
    std::vector<double> frp;
    for (const auto& r : synth.records) frp.push_back(r.event.frp);
    const auto cap = cap_percentile(frp, 0.99);
    for (double f : cap.values) y.push_back(label(f, LabelScheme::two_class()));
    return y;
  }(), {});
  const Matrix train_raw = take_rows(raw, parts.train);
  EXPECT_NEAR(out.scaler.mean(0), train_raw.col(0).mean(), 1e-12);
  EXPECT_EQ(out.train.rows(), parts.train.size());
  EXPECT_EQ(out.test.role, DataRole::kTest);
  EXPECT_NE(out.audit.at(2).find("train partition only"), std::string::npos);
}

TEST(Dataset, FileRoundTripKeepsManifest) {
  const auto synth = synth_fused({.rows = 120, .ratio = 0.3, .signal = 1.0, .seed = 5});
  const auto out = featurize(synth.records, {});
  const auto back = parse_dataset_text(write_dataset(out.train));
  EXPECT_EQ(back.x, out.train.x);
  EXPECT_EQ(back.y, out.train.y);
  EXPECT_EQ(back.manifest_hash(), out.train.manifest_hash());
  EXPECT_EQ(back.role, DataRole::kTrain);
  EXPECT_THROW(parse_dataset_text("a,label\n1,low\n"), SchemaError);
}
