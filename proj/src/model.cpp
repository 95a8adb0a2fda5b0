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

#include "bushfire/model.hpp"

#include "bushfire/text.hpp"

namespace bushfire {

Labels argmax_rows(const Matrix& proba) {
  Labels out(static_cast<std::size_t>(proba.rows()));
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < proba.cols(); ++c)
      if (proba(i, c) > proba(i, best)) best = c;
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

Labels apply_threshold(const Matrix& proba, double threshold) {
  if (proba.cols() != 2) throw PreconditionError("threshold decisions need a binary model");
  Labels out(static_cast<std::size_t>(proba.rows()));
  for (Eigen::Index i = 0; i < proba.rows(); ++i) out[static_cast<std::size_t>(i)] = proba(i, 1) >= threshold ? 1 : 0;
  return out;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  Matrix m(rows, cols);
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows) throw SchemaError("matrix: row count mismatch");
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = data[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != cols) throw SchemaError("matrix: column count mismatch");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Vector vector_from_json(const Json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

ModelArtifact ModelArtifact::wrap(ClassifierPtr model, std::vector<std::string> features,
                                  std::vector<std::string> classes) {
  if (!model) throw PreconditionError("artifact: null model");
  if (static_cast<int>(classes.size()) != model->n_classes())
    throw PreconditionError("artifact: class list does not match the model");
  ModelArtifact a;
  a.family = model->family();
  a.hyperparameters = model->hyperparameters();
  a.parameters = model->parameters();
  a.features = std::move(features);
  a.classes = std::move(classes);
  a.warnings = model->warnings();
  a.model = std::move(model);
  return a;
}

void ModelArtifact::check_manifest(const std::vector<std::string>& feature_names) const {
  const auto got = bushfire::manifest_hash(feature_names);
  const auto expected = manifest_hash();
  if (got != expected)
    throw ManifestError("feature manifest mismatch: expected " + expected + " (" +
                        std::to_string(features.size()) + " features), got " + got + " (" +
                        std::to_string(feature_names.size()) + " features)");
}

Matrix ModelArtifact::predict_proba(const Dataset& data) const {
  check_manifest(data.feature_names);
  return model->predict_proba(data.x);
}

Labels ModelArtifact::predict(const Dataset& data) const {
  const Matrix p = predict_proba(data);
  if (threshold && p.cols() == 2) return apply_threshold(p, *threshold);
  return argmax_rows(p);
}

std::string ModelArtifact::to_text() const {
  Json j{{"schema_version", schema_version},
         {"family", family},
         {"hyperparameters", hyperparameters},
         {"parameters", parameters},
         {"features", features},
         {"manifest", manifest_hash()},
         {"classes", classes},
         {"warnings", warnings}};
  j["threshold"] = threshold ? Json(*threshold) : Json(nullptr);
  return j.dump(1) + "\n";
}

ModelArtifact ModelArtifact::from_text(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("artifact: ") + e.what());
  }
  ModelArtifact a;
  try {
    a.schema_version = j.at("schema_version").get<int>();
    if (a.schema_version != kArtifactSchemaVersion)
      throw SchemaError("artifact: unsupported schema_version " + std::to_string(a.schema_version));
    a.family = j.at("family").get<std::string>();
    a.hyperparameters = j.at("hyperparameters");
    a.parameters = j.at("parameters");
    a.features = j.at("features").get<std::vector<std::string>>();
    a.classes = j.at("classes").get<std::vector<std::string>>();
    a.warnings = j.value("warnings", std::vector<std::string>{});
    if (j.contains("threshold") && !j.at("threshold").is_null()) a.threshold = j.at("threshold").get<double>();
    if (j.contains("manifest") && j.at("manifest").get<std::string>() != a.manifest_hash())
      throw SchemaError("artifact: stored manifest does not match its feature list");
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("artifact: ") + e.what());
  }
  a.model = load_classifier(a.family, a.hyperparameters, a.parameters);
  return a;
}

void ModelArtifact::save(const std::filesystem::path& path) const { write_file(path, to_text()); }

ModelArtifact ModelArtifact::load(const std::filesystem::path& path) { return from_text(read_file(path)); }

}  // namespace bushfire
