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

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace bushfire {

// Samples are rows, features are columns.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Class indices in [0, n_classes). Ordering follows the label scheme
// (low < medium < high).
using Labels = std::vector<int>;
using Indices = std::vector<std::size_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed headers, unknown enum codes, unreadable files: exit code 2.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Violated operation preconditions and invalid configuration: exit code 1.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class LeakageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ManifestError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class PrerequisiteError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Number of distinct classes implied by a label vector (max label + 1).
inline int count_classes(const Labels& y) {
  int k = 0;
  for (int v : y) k = std::max(k, v + 1);
  return k;
}

inline std::vector<std::size_t> class_counts(const Labels& y, int n_classes) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
  for (int v : y) ++counts[static_cast<std::size_t>(v)];
  return counts;
}

// Gathers the given rows of a matrix / label vector.
Matrix take_rows(const Matrix& x, const Indices& rows);
Labels take(const Labels& y, const Indices& rows);

// 64-bit FNV-1a; used for manifest and file digests (not cryptographic).
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

}  // namespace bushfire
