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

#include "bushfire/config.hpp"

#include <array>
#include <sstream>

#include "bushfire/text.hpp"

namespace bushfire {

namespace {

constexpr std::array kKnownKeys = {
    "seed", "threads", "out",
    "input.fire", "input.weather", "input.ndvi", "input.fused",
    "window.start", "window.end",
    "join.radius_km", "join.idw_power", "join.ndvi_window_days", "join.ndvi_max_distance_km",
    "labels.scheme", "labels.thresholds", "labels.frp_cap_quantile",
    "features.raw_weather",
    "split.test_fraction",
    "resample.enabled", "resample.k_neighbors", "resample.target_ratio", "resample.tomek_policy",
    "train.model", "train.baselines",
    "search.enabled", "search.n_iter", "search.n_folds", "search.scoring",
    "stack.base", "stack.n_folds", "stack.meta_l2",
    "threshold.optimize",
    "synth.rows", "synth.ratio", "synth.signal", "synth.mode",
};

}  // namespace

bool is_known_config_key(const std::string& key) {
  for (const char* k : kKnownKeys)
    if (key == k) return true;
  // model.<family>.<param>
  if (key.rfind("model.", 0) == 0) {
    const auto dot = key.find('.', 6);
    return dot != std::string::npos && dot > 6 && dot + 1 < key.size();
  }
  return false;
}

Config Config::parse(std::string_view text, const std::string& origin) {
  Config c;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) throw PreconditionError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw PreconditionError(where + ": empty key");
    if (!is_known_config_key(key)) throw PreconditionError(where + ": unknown key \"" + key + "\"");
    if (c.has(key)) throw PreconditionError(where + ": duplicate key \"" + key + "\"");
    c.values_[key] = value;
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }

void Config::set(const std::string& key, const std::string& value) {
  if (!is_known_config_key(key)) throw PreconditionError("unknown config key \"" + key + "\"");
  values_[key] = value;
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::num(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto v = parse_double(it->second);
  if (!v) throw PreconditionError("config: " + key + " must be a number, got \"" + it->second + "\"");
  return *v;
}

long long Config::integer(const std::string& key, long long fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto v = parse_int(it->second);
  if (!v) throw PreconditionError("config: " + key + " must be an integer, got \"" + it->second + "\"");
  return *v;
}

bool Config::flag(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw PreconditionError("config: " + key + " must be true or false, got \"" + it->second + "\"");
}

std::vector<std::string> Config::list(const std::string& key, const std::vector<std::string>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::string> out;
  std::string_view rest = it->second;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::map<std::string, std::string> Config::section(const std::string& prefix) const {
  std::map<std::string, std::string> out;
  const std::string p = prefix + ".";
  for (const auto& [k, v] : values_)
    if (k.rfind(p, 0) == 0) out[k.substr(p.size())] = v;
  return out;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::string Config::hash() const {
  // Execution settings do not change results and stay out of the digest.
  std::string text;
  for (const auto& [k, v] : values_)
    if (k != "threads" && k != "out") text += k + " = " + v + "\n";
  return hex64(fnv1a64(text));
}

}  // namespace bushfire
