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

#include "bushfire/features.hpp"

#include <algorithm>
#include <cmath>

#include "bushfire/random.hpp"
#include "json.hpp"

namespace bushfire {

LabelScheme LabelScheme::two_class(double cut) {
  return LabelScheme{LabelMode::kTwoClass, {cut}, {"low", "high"}};
}

LabelScheme LabelScheme::three_class(double t1, double t2) {
  return LabelScheme{LabelMode::kThreeClass, {t1, t2}, {"low", "medium", "high"}};
}

void LabelScheme::validate() const {
  const std::size_t expected = mode == LabelMode::kTwoClass ? 1 : 2;
  if (thresholds.size() != expected)
    throw PreconditionError("label scheme: expected " + std::to_string(expected) + " threshold(s)");
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (!(thresholds[i - 1] < thresholds[i]))
      throw PreconditionError("label scheme: thresholds must be strictly increasing");
  if (class_names.size() != thresholds.size() + 1)
    throw PreconditionError("label scheme: need one class name per class");
}

int label(double frp, const LabelScheme& scheme) {
  int cls = 0;
  for (double t : scheme.thresholds)
    if (frp > t) ++cls;
  return cls;
}

std::pair<double, double> encode_month(int month) {
  if (month < 1 || month > 12) throw PreconditionError("encode_month: month must be in 1..12");
  // sin(2πk/12) for k = 0..11, written out so quarter points are exact.
  static const double h = std::sqrt(3.0) / 2.0;
  static const double sines[12] = {0.0, 0.5, h, 1.0, h, 0.5, 0.0, -0.5, -h, -1.0, -h, -0.5};
  const int k = month % 12;
  return {sines[k], sines[(k + 3) % 12]};
}

double quantile_linear(std::span<const double> values, double q) {
  if (values.empty()) throw PreconditionError("quantile: empty input");
  if (!(q >= 0.0 && q <= 1.0)) throw PreconditionError("quantile: q must be in [0, 1]");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= s.size()) return s.back();
  return s[lo] + (pos - static_cast<double>(lo)) * (s[lo + 1] - s[lo]);
}

CapResult cap_percentile(std::span<const double> values, double q) {
  for (double v : values)
    if (!std::isfinite(v)) throw PreconditionError("cap_percentile: non-finite value");
  const double cap = quantile_linear(values, q);
  return {cap, apply_cap(values, cap)};
}

std::vector<double> apply_cap(std::span<const double> values, double cap) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(std::min(v, cap));
  return out;
}

std::vector<std::string> feature_names(const FeatureOptions& opts) {
  std::vector<std::string> names = {"diurnal_range", "wspd",       "month_sin",  "month_cos",
                                    "ndvi_scaled",   "wspd_prcp",  "ndvi_prcp",  "range_prcp",
                                    "region_WA",     "region_QLD", "region_VIC", "region_TAS",
                                    "region_SA",     "distance_m"};
  if (opts.raw_weather) {
    for (const char* extra : {"tmin", "tmax", "tavg", "prcp"}) names.emplace_back(extra);
  }
  return names;
}

std::vector<bool> continuous_mask(const std::vector<std::string>& names) {
  std::vector<bool> mask;
  mask.reserve(names.size());
  for (const auto& n : names) mask.push_back(n.rfind("region_", 0) != 0);
  return mask;
}

Eigen::RowVectorXd engineer_raw(const FusedRecord& rec, const FeatureOptions& opts) {
  const auto& w = rec.weather;
  const double range = w.tmax - w.tmin;
  const auto [msin, mcos] = encode_month(static_cast<int>(static_cast<unsigned>(rec.event.date.month())));
  auto dummy = [&](Region r) { return rec.region == r ? 1.0 : 0.0; };
  std::vector<double> v = {range,
                           w.wspd,
                           msin,
                           mcos,
                           rec.ndvi,
                           w.wspd * w.prcp,
                           rec.ndvi * w.prcp,
                           range * w.prcp,
                           dummy(Region::WA),
                           dummy(Region::QLD),
                           dummy(Region::VIC),
                           dummy(Region::TAS),
                           dummy(Region::SA),
                           rec.distance_m};
  if (opts.raw_weather) {
    v.insert(v.end(), {w.tmin, w.tmax, w.tavg, w.prcp});
  }
  return Eigen::Map<const Eigen::RowVectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Scaler fit_scaler(const Matrix& train, const std::vector<std::string>& names,
                  const std::vector<bool>& continuous) {
  if (static_cast<std::size_t>(train.cols()) != names.size() || names.size() != continuous.size())
    throw PreconditionError("fit_scaler: column count mismatch");
  if (train.rows() == 0) throw PreconditionError("fit_scaler: no training rows");
  Scaler s;
  s.names = names;
  const Eigen::Index d = train.cols();
  s.mean = Vector::Zero(d);
  s.scale = Vector::Ones(d);
  s.active.assign(static_cast<std::size_t>(d), false);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!continuous[static_cast<std::size_t>(j)]) continue;
    const double mu = train.col(j).mean();
    const double var = (train.col(j).array() - mu).square().mean();
    const double sd = std::sqrt(var);
    if (!(sd > 0.0)) {
      s.warnings.push_back("feature '" + names[static_cast<std::size_t>(j)] +
                           "' is constant on the training rows; passed through unscaled");
      continue;
    }
    s.mean(j) = mu;
    s.scale(j) = sd;
    s.active[static_cast<std::size_t>(j)] = true;
  }
  return s;
}

Matrix Scaler::apply(const Matrix& x) const {
  if (x.cols() != mean.size()) throw PreconditionError("scaler: column count mismatch");
  Matrix out = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    if (active[static_cast<std::size_t>(j)]) out.col(j) = (x.col(j).array() - mean(j)) / scale(j);
  return out;
}

Matrix Scaler::invert(const Matrix& x) const {
  if (x.cols() != mean.size()) throw PreconditionError("scaler: column count mismatch");
  Matrix out = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    if (active[static_cast<std::size_t>(j)]) out.col(j) = x.col(j).array() * scale(j) + mean(j);
  return out;
}

std::string Scaler::to_json() const {
  nlohmann::json j;
  j["names"] = names;
  j["mean"] = std::vector<double>(mean.data(), mean.data() + mean.size());
  j["scale"] = std::vector<double>(scale.data(), scale.data() + scale.size());
  j["active"] = active;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

Scaler Scaler::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  Scaler s;
  s.names = j.at("names").get<std::vector<std::string>>();
  const auto m = j.at("mean").get<std::vector<double>>();
  const auto sc = j.at("scale").get<std::vector<double>>();
  s.mean = Eigen::Map<const Vector>(m.data(), static_cast<Eigen::Index>(m.size()));
  s.scale = Eigen::Map<const Vector>(sc.data(), static_cast<Eigen::Index>(sc.size()));
  s.active = j.at("active").get<std::vector<bool>>();
  s.warnings = j.at("warnings").get<std::vector<std::string>>();
  return s;
}

Eigen::RowVectorXd engineer(const FusedRecord& rec, const Scaler& scaler, const FeatureOptions& opts) {
  Matrix row = engineer_raw(rec, opts);
  return scaler.apply(row).row(0);
}

std::string_view to_string(DataRole role) {
  switch (role) {
    case DataRole::kTrain: return "train";
    case DataRole::kValidation: return "validation";
    case DataRole::kTest: return "test";
    case DataRole::kUnspecified: break;
  }
  return "unspecified";
}

std::string manifest_hash(const std::vector<std::string>& feature_names) {
  std::string joined;
  for (const auto& n : feature_names) {
    joined += n;
    joined.push_back(',');
  }
  return hex64(fnv1a64(joined));
}

std::string Dataset::manifest_hash() const { return bushfire::manifest_hash(feature_names); }

std::string write_dataset(const Dataset& data) {
  std::string classes;
  for (std::size_t i = 0; i < data.class_names.size(); ++i) {
    if (i) classes.push_back('|');
    classes += data.class_names[i];
  }
  std::string out = "# manifest=" + data.manifest_hash() + " classes=" + classes +
                    " role=" + std::string(to_string(data.role)) + "\n";
  auto header = data.feature_names;
  header.emplace_back("label");
  out += join_csv(header) + "\n";
  std::vector<std::string> fields(header.size());
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.x.cols(); ++j)
      fields[static_cast<std::size_t>(j)] = format_double(data.x(i, j));
    fields.back() = data.class_names.at(static_cast<std::size_t>(data.y[static_cast<std::size_t>(i)]));
    out += join_csv(fields);
    out.push_back('\n');
  }
  return out;
}

namespace {

std::string manifest_field(std::string_view line, std::string_view key) {
  const std::string pat = std::string(key) + "=";
  auto pos = line.find(pat);
  if (pos == std::string_view::npos) return {};
  auto start = pos + pat.size();
  auto end = line.find(' ', start);
  return std::string(line.substr(start, end == std::string_view::npos ? line.size() - start : end - start));
}

}  // namespace

Dataset parse_dataset_text(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.size() < 2 || lines[0].rfind("# manifest=", 0) != 0)
    throw SchemaError("feature file is missing its manifest line");
  Dataset d;
  const std::string manifest = manifest_field(lines[0], "manifest");
  const std::string classes = manifest_field(lines[0], "classes");
  const std::string role = manifest_field(lines[0], "role");
  for (std::size_t start = 0; start <= classes.size();) {
    auto end = classes.find('|', start);
    if (end == std::string::npos) end = classes.size();
    d.class_names.push_back(classes.substr(start, end - start));
    start = end + 1;
  }
  if (role == "train") d.role = DataRole::kTrain;
  else if (role == "validation") d.role = DataRole::kValidation;
  else if (role == "test") d.role = DataRole::kTest;

  auto header = split_csv_line(lines[1]);
  if (header.empty() || trim(header.back()) != "label")
    throw SchemaError("feature file header must end with a \"label\" column");
  header.pop_back();
  for (auto& h : header) d.feature_names.emplace_back(trim(h));
  if (bushfire::manifest_hash(d.feature_names) != manifest)
    throw ManifestError("feature file manifest hash does not match its header (expected " +
                        manifest + ", got " + bushfire::manifest_hash(d.feature_names) + ")");

  const std::size_t n = lines.size() - 2;
  const auto p = static_cast<Eigen::Index>(d.feature_names.size());
  d.x.resize(static_cast<Eigen::Index>(n), p);
  d.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = split_csv_line(lines[i + 2]);
    if (f.size() != d.feature_names.size() + 1)
      throw SchemaError("feature file row " + std::to_string(i + 1) + " has the wrong column count");
    for (Eigen::Index j = 0; j < p; ++j) {
      auto v = parse_double(f[static_cast<std::size_t>(j)]);
      if (!v) throw SchemaError("feature file row " + std::to_string(i + 1) + " has a non-numeric value");
      d.x(static_cast<Eigen::Index>(i), j) = *v;
    }
    const auto cls = std::find(d.class_names.begin(), d.class_names.end(), trim(f.back()));
    if (cls == d.class_names.end())
      throw SchemaError("feature file row " + std::to_string(i + 1) + " has an unknown class label");
    d.y[i] = static_cast<int>(cls - d.class_names.begin());
  }
  return d;
}

Dataset read_dataset(const std::filesystem::path& path) { return parse_dataset_text(read_file(path)); }

SplitIndices stratified_split(const Labels& y, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
    throw PreconditionError("split: test_fraction must be in (0, 1)");
  const int k = count_classes(y);
  std::vector<Indices> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < y.size(); ++i) members[static_cast<std::size_t>(y[i])].push_back(i);
  SplitIndices out;
  for (int c = 0; c < k; ++c) {
    auto& idx = members[static_cast<std::size_t>(c)];
    if (idx.empty()) continue;
    if (idx.size() < 2)
      throw PreconditionError("split: class " + std::to_string(c) + " has fewer than 2 rows");
    Rng rng(derive_seed(spec.seed, 0x5911u, static_cast<std::uint64_t>(c)));
    rng.shuffle(idx);
    auto n_test = static_cast<std::size_t>(std::llround(spec.test_fraction * static_cast<double>(idx.size())));
    n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
    out.test.insert(out.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

FeaturizeResult featurize(std::span<const FusedRecord> records, const FeaturizeConfig& config) {
  config.scheme.validate();
  if (records.empty()) throw PreconditionError("featurize: no fused records");
  FeaturizeResult out;

  std::vector<double> frp;
  frp.reserve(records.size());
  for (const auto& r : records) frp.push_back(r.event.frp);
  auto capped = cap_percentile(frp, config.frp_cap_quantile);
  out.frp_cap = capped.cap;
  out.audit.push_back("frp capped at quantile " + format_double(config.frp_cap_quantile) + " = " +
                      format_double(capped.cap));

  const auto names = feature_names(config.features);
  const auto n = static_cast<Eigen::Index>(records.size());
  Matrix raw(n, static_cast<Eigen::Index>(names.size()));
  Labels y(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    raw.row(static_cast<Eigen::Index>(i)) = engineer_raw(records[i], config.features);
    y[i] = label(capped.values[i], config.scheme);
  }

  const auto parts = stratified_split(y, config.split);
  out.audit.push_back("stratified split: " + std::to_string(parts.train.size()) + " train, " +
                      std::to_string(parts.test.size()) + " test");
  const Matrix train_raw = take_rows(raw, parts.train);
  out.scaler = fit_scaler(train_raw, names, continuous_mask(names));
  out.audit.push_back("scaler fit on train partition only (" + std::to_string(parts.train.size()) +
                      " rows)");

  auto make = [&](const Indices& rows, const Matrix& unscaled, DataRole role) {
    Dataset d;
    d.feature_names = names;
    d.class_names = config.scheme.class_names;
    d.x = out.scaler.apply(unscaled);
    d.y = take(y, rows);
    d.role = role;
    return d;
  };
  out.train = make(parts.train, train_raw, DataRole::kTrain);
  out.test = make(parts.test, take_rows(raw, parts.test), DataRole::kTest);
  out.audit.push_back("train-fit scaler applied to test partition");
  return out;
}

}  // namespace bushfire
