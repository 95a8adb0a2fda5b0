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

// Feature engineering: FRP capping and labelling, cyclic month encoding,
// interaction terms, region dummies, standardization and stratified splits.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bushfire/common.hpp"
#include "bushfire/fusion.hpp"

namespace bushfire {

enum class LabelMode { kTwoClass, kThreeClass };

// FRP cut points. A value equal to a cut point falls in the lower class.
struct LabelScheme {
  LabelMode mode = LabelMode::kTwoClass;
  std::vector<double> thresholds{40.0};
  std::vector<std::string> class_names{"low", "high"};

  static LabelScheme two_class(double cut = 40.0);
  static LabelScheme three_class(double t1 = 40.0, double t2 = 100.0);

  int n_classes() const { return static_cast<int>(thresholds.size()) + 1; }
  void validate() const;
};

int label(double frp, const LabelScheme& scheme);

// (sin 2πm/12, cos 2πm/12) for m in 1..12.
std::pair<double, double> encode_month(int month);

// q-quantile with linear interpolation between order statistics.
double quantile_linear(std::span<const double> values, double q);

struct CapResult {
  double cap;
  std::vector<double> values;
};

CapResult cap_percentile(std::span<const double> values, double q = 0.99);

// min(v, cap) for every value. Applying the same cap again changes nothing.
// Re-estimating the quantile on already capped data generally gives a lower
// cap, so a fitted cap is kept and reused rather than recomputed.
std::vector<double> apply_cap(std::span<const double> values, double cap);

struct FeatureOptions {
  // Appends tmin, tmax, tavg and prcp to the default feature list.
  bool raw_weather = false;
};

std::vector<std::string> feature_names(const FeatureOptions& opts = {});
// Standardized columns; region dummies stay 0/1.
std::vector<bool> continuous_mask(const std::vector<std::string>& names);

// Physical-unit feature vector in feature_names() order. ndvi_scaled holds
// raw NDVI until a scaler is applied.
Eigen::RowVectorXd engineer_raw(const FusedRecord& rec, const FeatureOptions& opts = {});

struct Scaler {
  std::vector<std::string> names;
  Vector mean;
  Vector scale;                       // population standard deviation
  std::vector<bool> active;           // false: column passes through
  std::vector<std::string> warnings;  // one per constant column

  Matrix apply(const Matrix& x) const;
  Matrix invert(const Matrix& x) const;
  std::string to_json() const;
  static Scaler from_json(std::string_view text);
};

Scaler fit_scaler(const Matrix& train, const std::vector<std::string>& names,
                  const std::vector<bool>& continuous);

Eigen::RowVectorXd engineer(const FusedRecord& rec, const Scaler& scaler,
                            const FeatureOptions& opts = {});

enum class DataRole { kUnspecified, kTrain, kValidation, kTest };

std::string_view to_string(DataRole role);

// Feature matrix with labels and a manifest (ordered feature names).
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
  Matrix x;
  Labels y;
  DataRole role = DataRole::kUnspecified;

  std::size_t rows() const { return y.size(); }
  std::string manifest_hash() const;
};

std::string manifest_hash(const std::vector<std::string>& feature_names);

// First line: "# manifest=<hash> classes=<a|b> role=<role>", then the
// header and one row per sample with the class name in the last column.
std::string write_dataset(const Dataset& data);
Dataset parse_dataset_text(std::string_view text);
Dataset read_dataset(const std::filesystem::path& path);

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  Indices train;
  Indices test;
};

// Per-class test counts are round(fraction * class count), clamped so that
// both sides keep at least one row of each class. Indices come back sorted.
SplitIndices stratified_split(const Labels& y, const SplitSpec& spec);

struct FeaturizeConfig {
  LabelScheme scheme{};
  FeatureOptions features{};
  double frp_cap_quantile = 0.99;
  SplitSpec split{};
};

struct FeaturizeResult {
  Dataset train;
  Dataset test;
  Scaler scaler;
  double frp_cap = 0.0;
  std::vector<std::string> audit;  // leakage-relevant steps, in order
};

FeaturizeResult featurize(std::span<const FusedRecord> records, const FeaturizeConfig& config);

}  // namespace bushfire
