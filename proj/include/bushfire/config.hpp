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

// Flat "dotted.key = value" experiment configuration.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bushfire/common.hpp"

namespace bushfire {

class Config {
 public:
  Config() = default;

  // Lines are "key = value"; '#' starts a comment; blank lines are ignored.
  // Unknown keys and duplicates are rejected.
  static Config parse(std::string_view text, const std::string& origin = "config");
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key, double fallback) const;
  long long integer(const std::string& key, long long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<std::string> list(const std::string& key, const std::vector<std::string>& fallback) const;

  // Keys under `prefix.` with the prefix removed.
  std::map<std::string, std::string> section(const std::string& prefix) const;

  // Canonical "key = value" lines in key order, and their FNV-1a digest.
  std::string canonical() const;
  std::string hash() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

// True for keys the pipeline understands; "model.<family>.<param>" keys are
// free-form hyperparameter overrides.
bool is_known_config_key(const std::string& key);

}  // namespace bushfire
