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

// Uniform classifier contract and the serialized model artifact.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bushfire/common.hpp"
#include "bushfire/features.hpp"
#include "json.hpp"

namespace bushfire {

using Json = nlohmann::json;

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string family() const = 0;
  virtual int n_classes() const = 0;
  // One row per sample, one column per class; rows sum to 1.
  virtual Matrix predict_proba(const Matrix& x) const = 0;
  virtual Json hyperparameters() const = 0;
  virtual Json parameters() const = 0;
  // Non-fatal fit diagnostics (e.g. optimizer did not converge).
  virtual std::vector<std::string> warnings() const { return {}; }
};

using ClassifierPtr = std::shared_ptr<const Classifier>;

// Argmax with ties to the lowest class index.
Labels argmax_rows(const Matrix& proba);

// Binary decision: class 1 when P(class 1) >= threshold.
Labels apply_threshold(const Matrix& proba, double threshold);

// Rebuilds a classifier from its family tag and serialized parts.
ClassifierPtr load_classifier(const std::string& family, const Json& hyperparameters,
                              const Json& parameters);

inline constexpr int kArtifactSchemaVersion = 1;

struct ModelArtifact {
  int schema_version = kArtifactSchemaVersion;
  std::string family;
  Json hyperparameters;
  Json parameters;
  std::vector<std::string> features;
  std::vector<std::string> classes;
  std::optional<double> threshold;
  std::vector<std::string> warnings;
  ClassifierPtr model;

  static ModelArtifact wrap(ClassifierPtr model, std::vector<std::string> features,
                            std::vector<std::string> classes);

  std::string manifest_hash() const { return bushfire::manifest_hash(features); }

  // Throws ManifestError naming the expected and received manifests.
  void check_manifest(const std::vector<std::string>& feature_names) const;

  Matrix predict_proba(const Dataset& data) const;
  // Applies the stored threshold for binary models, argmax otherwise.
  Labels predict(const Dataset& data) const;

  std::string to_text() const;
  static ModelArtifact from_text(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static ModelArtifact load(const std::filesystem::path& path);
};

// Eigen <-> JSON helpers shared by the model serializers.
Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Matrix matrix_from_json(const Json& j);
Vector vector_from_json(const Json& j);

}  // namespace bushfire
