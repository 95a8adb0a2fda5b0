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

// Batch pipeline stages. Each stage reads the previous stage's files under
// the output directory, writes its own and records itself in
// <out>/manifest.json:
//
//   ingest     <out>/ingest/{fire,weather,ndvi}.csv, drops.json
//   fuse       <out>/fuse/fused.csv, exclusions.json
//   synth      <out>/fuse/fused.csv (fused mode) or <out>/synth/*.csv (raw)
//   featurize  <out>/features/{train,test}.csv, scaler.json, audit.txt
//   train      <out>/models/model.json, baseline_<family>.json, CV tables
//   evaluate   <out>/eval/<model>_report.{json,txt}, confusion, ROC, VIF,
//              correlation tables and summary.json
//   report     <out>/report/ re-rendered from <out>/eval
//
// Metric files never contain timings; those live in the manifest only.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "bushfire/config.hpp"
#include "bushfire/ensemble.hpp"
#include "bushfire/metrics.hpp"

namespace bushfire {

// Model family aliases accepted in configs: tree, forest, gbdt (leaf-wise),
// gbdt_leaf, gbdt_depth, logistic, mlp, majority. Hyperparameter overrides
// come from "model.<alias>.<param>" keys.
LearnerSpec resolve_learner(const std::string& alias, const Config& config);

// Default random-search space for a learner family.
std::map<std::string, Distribution> default_search_space(const LearnerSpec& spec);

ClassificationReport report_from_json(std::string_view text);

class Pipeline {
 public:
  Pipeline(Config config, std::ostream& log);

  void ingest();
  void fuse();
  void synth();
  void featurize();
  void train();
  void evaluate();
  void predict(const std::optional<std::filesystem::path>& model, const std::optional<std::filesystem::path>& input,
               const std::optional<std::filesystem::path>& output);
  void report();

  const std::filesystem::path& out() const { return out_; }

 private:
  std::filesystem::path require(const std::filesystem::path& relative, const std::string& producer) const;
  void record(const std::string& stage, const Json& entry) const;

  Config config_;
  std::ostream& log_;
  std::filesystem::path out_;
  std::uint64_t seed_ = 0;
  int threads_ = 1;
};

}  // namespace bushfire
