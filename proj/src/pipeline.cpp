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

#include "bushfire/pipeline.hpp"

#include <chrono>
#include <ostream>
#include <sstream>

#include "bushfire/features.hpp"
#include "bushfire/fusion.hpp"
#include "bushfire/ingest.hpp"
#include "bushfire/synth.hpp"
#include "bushfire/text.hpp"

namespace bushfire {

namespace fs = std::filesystem;

namespace {

Json parse_value(const std::string& v) {
  try {
    return Json::parse(v);
  } catch (const Json::parse_error&) {
    return v;
  }
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string digest(const fs::path& p) { return hex64(fnv1a64(read_file(p))); }

Json drops_json(const DropSummary& d) {
  return Json{{"rows", d.rows}, {"dropped", d.dropped()}, {"by_cause", d.by_cause}};
}

// Empty files (no header at all) read as zero records.
template <class Record, class Parser>
ParseResult<Record> parse_or_empty(const fs::path& path, Parser parse, const IngestOptions& opts, std::ostream& log,
                                   const char* kind) {
  const std::string text = read_file(path);
  if (trim(text).empty()) {
    log << "warning: " << kind << " file " << path.string() << " is empty\n";
    return {};
  }
  return parse(text, opts);
}

LabelScheme label_scheme(const Config& c) {
  const auto scheme = c.str("labels.scheme", "two_class");
  const auto cuts = c.list("labels.thresholds", {});
  auto cut = [&](std::size_t i, double fallback) {
    if (i >= cuts.size()) return fallback;
    const auto v = parse_double(cuts[i]);
    if (!v) throw PreconditionError("config: labels.thresholds must be numbers");
    return *v;
  };
  if (scheme == "two_class") return LabelScheme::two_class(cut(0, 40.0));
  if (scheme == "three_class") return LabelScheme::three_class(cut(0, 40.0), cut(1, 100.0));
  throw PreconditionError("config: labels.scheme must be two_class or three_class");
}

std::optional<ResampleConfig> resample_config(const Config& c, std::uint64_t seed, int threads) {
  if (!c.flag("resample.enabled", true)) return std::nullopt;
  ResampleConfig r;
  r.k_neighbors = static_cast<int>(c.integer("resample.k_neighbors", r.k_neighbors));
  r.target_ratio = c.num("resample.target_ratio", r.target_ratio);
  r.tomek_policy = parse_tomek_policy(c.str("resample.tomek_policy", "remove-majority-only"));
  r.seed = seed;
  r.threads = threads;
  r.validate();
  return r;
}

std::string model_name(const fs::path& p) { return p.stem().string(); }

}  // namespace

LearnerSpec resolve_learner(const std::string& alias, const Config& config) {
  LearnerSpec spec;
  if (alias == "gbdt" || alias == "gbdt_leaf") {
    spec = {"gbdt", Json{{"growth", "leaf_wise"}}};
  } else if (alias == "gbdt_depth") {
    spec = {"gbdt", Json{{"growth", "depth_wise"}}};
  } else if (alias == "tree" || alias == "forest" || alias == "logistic" || alias == "mlp" || alias == "majority") {
    spec = {alias, Json::object()};
  } else {
    throw PreconditionError("unknown model family \"" + alias + "\"");
  }
  for (const auto& [k, v] : config.section("model." + alias)) spec.params[k] = parse_value(v);
  return spec;
}

std::map<std::string, Distribution> default_search_space(const LearnerSpec& spec) {
  using D = Distribution;
  std::map<std::string, Distribution> s;
  if (spec.family == "forest") {
    s["n_trees"] = D::choice({100, 200});
    s["max_depth"] = D::choice({-1, 10, 20});
    s["min_samples_leaf"] = D::choice({1, 2, 4});
    s["max_features"] = D::choice({"sqrt", "log2"});
  } else if (spec.family == "gbdt") {
    s["n_estimators"] = D::choice({100, 200});
    s["learning_rate"] = D::choice({0.01, 0.05, 0.1});
    if (spec.params.value("growth", std::string("leaf_wise")) == "depth_wise")
      s["max_depth"] = D::choice({3, 5, 7});
    else
      s["max_leaves"] = D::choice({15, 31, 63});
  } else if (spec.family == "logistic") {
    s["l2"] = D::log_uniform(1e-5, 1e-1);
  } else if (spec.family == "mlp") {
    s["hidden"] = D::choice({Json::array({100, 100, 50}), Json::array({64, 32})});
    s["activation"] = D::choice({"relu", "tanh"});
    s["alpha"] = D::log_uniform(1e-5, 1e-2);
  } else if (spec.family == "tree") {
    s["max_depth"] = D::choice({-1, 5, 10, 20});
    s["min_samples_leaf"] = D::choice({1, 5, 20});
  }
  return s;
}

ClassificationReport report_from_json(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    ClassificationReport r;
    r.class_names = j.at("classes").get<std::vector<std::string>>();
    auto scores = [](const Json& s) {
      return ClassScores{s.at("precision").get<double>(), s.at("recall").get<double>(), s.at("f1").get<double>(),
                         s.at("support").get<std::int64_t>()};
    };
    for (const auto& name : r.class_names) r.per_class.push_back(scores(j.at("per_class").at(name)));
    r.accuracy = j.at("accuracy").get<double>();
    r.macro = scores(j.at("macro_avg"));
    r.weighted = scores(j.at("weighted_avg"));
    const auto k = static_cast<Eigen::Index>(r.class_names.size());
    r.confusion.resize(k, k);
    r.normalized.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index c = 0; c < k; ++c) {
        r.confusion(i, c) = j.at("confusion")[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<std::int64_t>();
        r.normalized(i, c) =
            j.at("confusion_row_percent")[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
      }
    r.zero_division = j.value("zero_division_as_zero", std::vector<std::string>{});
    return r;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("report: ") + e.what());
  }
}

Pipeline::Pipeline(Config config, std::ostream& log) : config_(std::move(config)), log_(log) {
  if (!config_.has("seed")) throw PreconditionError("a seed is required (config key `seed` or --seed)");
  const auto seed = parse_int(config_.str("seed", ""));
  if (!seed || *seed < 0) throw PreconditionError("seed must be a non-negative integer");
  seed_ = static_cast<std::uint64_t>(*seed);
  threads_ = static_cast<int>(config_.integer("threads", 1));
  if (threads_ < 1) throw PreconditionError("threads must be >= 1");
  out_ = config_.str("out", "out");
  // All referenced inputs must be distinct files.
  std::vector<std::string> inputs;
  for (const char* k : {"input.fire", "input.weather", "input.ndvi", "input.fused"})
    if (config_.has(k)) inputs.push_back(fs::path(config_.str(k, "")).lexically_normal().string());
  std::sort(inputs.begin(), inputs.end());
  if (std::adjacent_find(inputs.begin(), inputs.end()) != inputs.end())
    throw PreconditionError("config: input paths must be distinct");
}

fs::path Pipeline::require(const fs::path& relative, const std::string& producer) const {
  const fs::path p = out_ / relative;
  if (!fs::exists(p))
    throw PrerequisiteError("missing prerequisite " + p.string() + "; run `" + producer + "` first");
  return p;
}

void Pipeline::record(const std::string& stage, const Json& entry) const {
  const fs::path path = out_ / "manifest.json";
  Json m = Json::object();
  if (fs::exists(path)) {
    try {
      m = Json::parse(read_file(path));
    } catch (const Json::parse_error&) {
      m = Json::object();
    }
  }
  m["config_hash"] = config_.hash();
  m["seed"] = seed_;
  m["stages"][stage] = entry;
  write_file(path, m.dump(2) + "\n");
}

void Pipeline::ingest() {
  Stopwatch sw;
  IngestOptions opts;
  if (config_.has("window.start")) {
    const auto d = parse_date(config_.str("window.start", ""));
    if (!d) throw PreconditionError("config: window.start must be YYYY-MM-DD");
    opts.study_start = *d;
  }
  if (config_.has("window.end")) {
    const auto d = parse_date(config_.str("window.end", ""));
    if (!d) throw PreconditionError("config: window.end must be YYYY-MM-DD");
    opts.study_end = *d;
  }
  for (const char* k : {"input.fire", "input.weather", "input.ndvi"})
    if (!config_.has(k)) throw PreconditionError(std::string("config: ") + k + " is required for ingest");
  const fs::path fire = config_.str("input.fire", ""), weather = config_.str("input.weather", ""),
                 ndvi = config_.str("input.ndvi", "");

  const auto f = parse_or_empty<FireEvent>(fire, parse_fire_events_text, opts, log_, "fire");
  const auto w = parse_or_empty<WeatherDay>(weather, parse_weather_text, opts, log_, "weather");
  const auto n = parse_or_empty<NdviSample>(ndvi, parse_ndvi_text, opts, log_, "ndvi");
  if (f.records.empty()) log_ << "warning: no fire events after ingest\n";

  write_file(out_ / "ingest" / "fire.csv", write_fire_events(f.records));
  write_file(out_ / "ingest" / "weather.csv", write_weather(w.records));
  write_file(out_ / "ingest" / "ndvi.csv", write_ndvi(n.records));
  const Json drops{{"fire", drops_json(f.drops)}, {"weather", drops_json(w.drops)}, {"ndvi", drops_json(n.drops)}};
  write_file(out_ / "ingest" / "drops.json", drops.dump(2) + "\n");

  log_ << "ingest: " << f.records.size() << " fire events, " << w.records.size() << " weather days, "
       << n.records.size() << " ndvi samples\n";
  record("ingest", Json{{"inputs", {{fire.string(), digest(fire)}, {weather.string(), digest(weather)},
                                    {ndvi.string(), digest(ndvi)}}},
                        {"counts", {{"fire", f.records.size()}, {"weather", w.records.size()}, {"ndvi", n.records.size()}}},
                        {"drops", drops},
                        {"seconds", sw.seconds()}});
}

void Pipeline::fuse() {
  Stopwatch sw;
  const auto fire_p = require("ingest/fire.csv", "ingest");
  const auto weather_p = require("ingest/weather.csv", "ingest");
  const auto ndvi_p = require("ingest/ndvi.csv", "ingest");
  const auto fire = parse_fire_events(fire_p);
  const auto weather = parse_weather(weather_p);
  const auto ndvi = parse_ndvi(ndvi_p);
  FusionConfig fc;
  fc.radius_km = config_.num("join.radius_km", fc.radius_km);
  fc.idw_power = config_.num("join.idw_power", fc.idw_power);
  fc.ndvi_window_days = static_cast<int>(config_.integer("join.ndvi_window_days", fc.ndvi_window_days));
  fc.ndvi_max_distance_km = config_.num("join.ndvi_max_distance_km", fc.ndvi_max_distance_km);
  fc.threads = threads_;
  const auto result = bushfire::fuse(fire.records, weather.records, ndvi.records, fc);
  write_file(out_ / "fuse" / "fused.csv", write_fused(result.records));
  write_file(out_ / "fuse" / "exclusions.json", result.exclusions.to_json());
  log_ << "fuse: " << result.records.size() << " of " << fire.records.size() << " events fused, "
       << result.exclusions.excluded() << " excluded\n";
  record("fuse", Json{{"inputs", {{fire_p.string(), digest(fire_p)}, {weather_p.string(), digest(weather_p)},
                                  {ndvi_p.string(), digest(ndvi_p)}}},
                      {"counts", {{"events", fire.records.size()}, {"fused", result.records.size()},
                                  {"excluded", result.exclusions.excluded()}}},
                      {"exclusions", result.exclusions.by_cause},
                      {"seconds", sw.seconds()}});
}

void Pipeline::synth() {
  Stopwatch sw;
  SynthSpec spec;
  const auto rows = config_.integer("synth.rows", static_cast<long long>(spec.rows));
  if (rows < 2) throw PreconditionError("synth.rows must be >= 2");
  spec.rows = static_cast<std::size_t>(rows);
  spec.ratio = config_.num("synth.ratio", spec.ratio);
  spec.signal = config_.num("synth.signal", spec.signal);
  spec.seed = seed_;
  const auto mode = config_.str("synth.mode", "fused");
  Json entry{{"spec", {{"rows", spec.rows}, {"ratio", spec.ratio}, {"signal", spec.signal}, {"mode", mode}}}};
  if (mode == "fused") {
    const auto result = synth_fused(spec);
    const fs::path p = out_ / "fuse" / "fused.csv";
    write_file(p, write_fused(result.records));
    std::size_t high = 0;
    for (const auto& r : result.records) high += r.event.frp > 40.0;
    log_ << "synth: " << result.records.size() << " fused records, " << high << " above 40 MW\n";
    entry["counts"] = {{"rows", result.records.size()}, {"high", high}};
    entry["intercept"] = result.intercept;
    entry["outputs"] = {{p.string(), digest(p)}};
  } else if (mode == "raw") {
    const auto raw = synth_raw(spec);
    write_file(out_ / "synth" / "fire.csv", raw.fire_csv);
    write_file(out_ / "synth" / "weather.csv", raw.weather_csv);
    write_file(out_ / "synth" / "ndvi.csv", raw.ndvi_csv);
    log_ << "synth: raw fire/weather/ndvi files in " << (out_ / "synth").string() << "\n";
    entry["outputs"] = Json::array({(out_ / "synth" / "fire.csv").string(), (out_ / "synth" / "weather.csv").string(),
                                    (out_ / "synth" / "ndvi.csv").string()});
  } else {
    throw PreconditionError("config: synth.mode must be fused or raw");
  }
  entry["seconds"] = sw.seconds();
  record("synth", entry);
}

void Pipeline::featurize() {
  Stopwatch sw;
  const fs::path input = config_.has("input.fused") ? fs::path(config_.str("input.fused", ""))
                                                    : require("fuse/fused.csv", "fuse` or `synth");
  const auto fused = parse_fused(input);
  FeaturizeConfig fc;
  fc.scheme = label_scheme(config_);
  fc.features.raw_weather = config_.flag("features.raw_weather", false);
  fc.frp_cap_quantile = config_.num("labels.frp_cap_quantile", fc.frp_cap_quantile);
  fc.split.test_fraction = config_.num("split.test_fraction", fc.split.test_fraction);
  fc.split.seed = seed_;
  const auto result = bushfire::featurize(fused.records, fc);
  write_file(out_ / "features" / "train.csv", write_dataset(result.train));
  write_file(out_ / "features" / "test.csv", write_dataset(result.test));
  write_file(out_ / "features" / "scaler.json", result.scaler.to_json());
  std::string audit;
  for (const auto& line : result.audit) audit += line + "\n";
  write_file(out_ / "features" / "audit.txt", audit);
  for (const auto& w : result.scaler.warnings) log_ << "warning: " << w << "\n";
  log_ << "featurize: " << result.train.rows() << " train rows, " << result.test.rows() << " test rows, FRP cap "
       << format_double(result.frp_cap) << "\n";
  record("featurize", Json{{"inputs", {{input.string(), digest(input)}}},
                           {"counts", {{"records", fused.records.size()}, {"train", result.train.rows()},
                                       {"test", result.test.rows()}, {"dropped", fused.drops.dropped()}}},
                           {"frp_cap", result.frp_cap},
                           {"seconds", sw.seconds()}});
}

void Pipeline::train() {
  Stopwatch sw;
  const auto train_p = require("features/train.csv", "featurize");
  const Dataset train = read_dataset(train_p);
  if (train.role == DataRole::kTest) throw LeakageError("train: refusing to fit on the test split");
  const int k = static_cast<int>(train.class_names.size());
  const auto resample = resample_config(config_, derive_seed(seed_, 0x7E5Au), threads_);
  const bool search = config_.flag("search.enabled", false);
  SearchSpec search_spec;
  search_spec.n_iter = static_cast<int>(config_.integer("search.n_iter", search_spec.n_iter));
  search_spec.n_folds = static_cast<int>(config_.integer("search.n_folds", search_spec.n_folds));
  search_spec.scoring = parse_scoring(config_.str("search.scoring", "macro_f1"));
  search_spec.resample = resample;
  search_spec.threads = threads_;

  Json entry{{"inputs", {{train_p.string(), digest(train_p)}}}};
  // Random search refines each learner's params in place.
  auto tune = [&](LearnerSpec spec, const std::string& alias) {
    if (!search) return spec;
    search_spec.space = default_search_space(spec);
    search_spec.seed = derive_seed(seed_, fnv1a64(alias));
    const auto result = random_search(train.x, train.y, spec, search_spec, k);
    write_file(out_ / "models" / ("search_" + alias + ".csv"), result.to_csv());
    log_ << "search " << alias << ": best mean " << format_double(result.best_score) << " with "
         << result.best_params.dump() << "\n";
    spec.params = result.best_params;
    return spec;
  };

  const auto primary = config_.str("train.model", "stack");
  std::optional<double> threshold;
  ClassifierPtr model;
  const bool optimize = k == 2 && config_.flag("threshold.optimize", true);
  Matrix validation_proba;  // cross-validated probabilities for threshold choice

  if (primary == "stack") {
    StackConfig sc;
    sc.base.clear();
    for (const auto& alias : config_.list("stack.base", {"forest", "gbdt_leaf"}))
      sc.base.push_back(tune(resolve_learner(alias, config_), alias));
    sc.n_folds = static_cast<int>(config_.integer("stack.n_folds", sc.n_folds));
    sc.meta.l2 = config_.num("stack.meta_l2", sc.meta.l2);
    sc.resample = resample;
    sc.seed = derive_seed(seed_, 0x57ACu);
    sc.threads = threads_;
    auto fit = fit_stack(train.x, train.y, sc, k);
    std::string audit;
    for (const auto& line : fit.audit) audit += line + "\n";
    write_file(out_ / "models" / "stack_audit.txt", audit);
    validation_proba = fit.oof_proba;
    model = fit.model;
  } else {
    const auto spec = tune(resolve_learner(primary, config_), primary);
    auto fit_one = [&](const Matrix& x, const Labels& y, std::uint64_t seed) {
      if (!resample) return fit_learner(spec, x, y, k, seed, threads_);
      ResampleConfig rc = *resample;
      rc.seed = derive_seed(seed, 0x7E5Au);
      const auto r = smote_tomek(x, y, rc);
      return fit_learner(spec, r.x, r.y, k, seed, threads_);
    };
    model = fit_one(train.x, train.y, derive_seed(seed_, 0x0DE1u));
    if (optimize) {
      const int folds = static_cast<int>(config_.integer("stack.n_folds", 5));
      const auto fold = stratified_kfold(train.y, folds, derive_seed(seed_, 0xC0Fu));
      validation_proba.resize(train.x.rows(), k);
      for (int f = 0; f < folds; ++f) {
        Indices tr, held;
        for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? held : tr).push_back(i);
        const auto m = fit_one(take_rows(train.x, tr), take(train.y, tr), derive_seed(seed_, 0xC0Fu, static_cast<std::uint64_t>(f) + 1));
        const Matrix p = m->predict_proba(take_rows(train.x, held));
        for (std::size_t r = 0; r < held.size(); ++r) validation_proba.row(static_cast<Eigen::Index>(held[r])) = p.row(static_cast<Eigen::Index>(r));
      }
    }
  }

  if (optimize) {
    const Vector p_high = validation_proba.col(1);
    const auto t = optimize_threshold(std::span<const double>(p_high.data(), static_cast<std::size_t>(p_high.size())),
                                      train.y, DataRole::kValidation);
    threshold = t.threshold;
    write_file(out_ / "models" / "threshold_curve.csv", t.to_csv());
    log_ << "threshold: " << format_double(t.threshold) << " (cross-validated F1 " << format_double(t.f1) << ")\n";
  }

  auto artifact = ModelArtifact::wrap(model, train.feature_names, train.class_names);
  artifact.threshold = threshold;
  artifact.save(out_ / "models" / "model.json");
  for (const auto& w : artifact.warnings) log_ << "warning: " << w << "\n";
  Json outputs = Json::array({(out_ / "models" / "model.json").string()});

  for (const auto& alias : config_.list("train.baselines", {"forest", "gbdt_leaf", "majority"})) {
    const auto spec = resolve_learner(alias, config_);
    ClassifierPtr m;
    if (resample && spec.family != "majority") {
      ResampleConfig rc = *resample;
      rc.seed = derive_seed(seed_, 0xBA5Eu, fnv1a64(alias));
      const auto r = smote_tomek(train.x, train.y, rc);
      m = fit_learner(spec, r.x, r.y, k, derive_seed(seed_, fnv1a64(alias)), threads_);
    } else {
      m = fit_learner(spec, train.x, train.y, k, derive_seed(seed_, fnv1a64(alias)), threads_);
    }
    const fs::path p = out_ / "models" / ("baseline_" + alias + ".json");
    ModelArtifact::wrap(m, train.feature_names, train.class_names).save(p);
    outputs.push_back(p.string());
  }
  log_ << "train: " << primary << " model on " << train.rows() << " rows\n";
  entry["outputs"] = outputs;
  entry["model"] = primary;
  entry["counts"] = {{"train", train.rows()}};
  entry["seconds"] = sw.seconds();
  record("train", entry);
}

void Pipeline::evaluate() {
  Stopwatch sw;
  const auto model_p = require("models/model.json", "train");
  const auto test_p = require("features/test.csv", "featurize");
  const auto train_p = require("features/train.csv", "featurize");
  const Dataset test = read_dataset(test_p);
  std::vector<fs::path> models{model_p};
  std::vector<fs::path> baselines;
  for (const auto& e : fs::directory_iterator(out_ / "models"))
    if (e.path().filename().string().rfind("baseline_", 0) == 0 && e.path().extension() == ".json")
      baselines.push_back(e.path());
  std::sort(baselines.begin(), baselines.end());
  models.insert(models.end(), baselines.begin(), baselines.end());

  const fs::path eval = out_ / "eval";
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  auto emit = [&](const std::string& name, const ClassificationReport& r) {
    write_file(eval / (name + "_report.json"), report_json(r));
    write_file(eval / (name + "_report.txt"), report_table(r));
    write_file(eval / (name + "_confusion.csv"), confusion_csv(r));
  };
  for (const auto& path : models) {
    const auto artifact = ModelArtifact::load(path);
    const std::string name = model_name(path);
    const Matrix proba = artifact.predict_proba(test);
    const auto r = classification_report(test.y, artifact.predict(test), test.class_names);
    emit(name, r);
    nlohmann::ordered_json s{{"family", artifact.family},
                             {"accuracy", r.accuracy},
                             {"macro_f1", r.macro.f1},
                             {"weighted_f1", r.weighted.f1},
                             {"high_recall", r.per_class.back().recall}};
    if (artifact.threshold) {
      s["threshold"] = *artifact.threshold;
      const auto r_default = classification_report(test.y, apply_threshold(proba, 0.5), test.class_names);
      emit(name + "_t050", r_default);
      s["high_recall_at_0.5"] = r_default.per_class.back().recall;
      s["macro_f1_at_0.5"] = r_default.macro.f1;
    }
    if (test.class_names.size() == 2) {
      const Vector p = proba.col(1);
      const std::span<const double> scores(p.data(), static_cast<std::size_t>(p.size()));
      const auto counts = class_counts(test.y, 2);
      if (counts[0] > 0 && counts[1] > 0) {
        s["roc_auc"] = roc_auc(scores, test.y);
        write_file(eval / (name + "_roc.csv"), roc_curve(scores, test.y).to_csv());
      }
    }
    summary[name] = s;
  }
  write_file(eval / "summary.json", summary.dump(2) + "\n");

  // Multicollinearity diagnostics on the training design matrix.
  const Dataset train = read_dataset(train_p);
  const auto corr = correlation_matrix(train.x);
  write_file(eval / "correlation.csv", matrix_csv(corr.r, train.feature_names));
  write_file(eval / "correlation.svg", correlation_svg(corr, train.feature_names));
  if (train.x.rows() > train.x.cols()) write_file(eval / "vif.csv", vif_csv(vif(train.x), train.feature_names));
  for (std::size_t j = 0; j < corr.constant.size(); ++j)
    if (corr.constant[j]) log_ << "warning: constant feature " << train.feature_names[j] << "\n";

  log_ << "evaluate: " << models.size() << " models on " << test.rows() << " test rows\n";
  record("evaluate", Json{{"inputs", {{model_p.string(), digest(model_p)}, {test_p.string(), digest(test_p)}}},
                          {"counts", {{"test", test.rows()}, {"models", models.size()}}},
                          {"seconds", sw.seconds()}});
}

void Pipeline::predict(const std::optional<fs::path>& model, const std::optional<fs::path>& input,
                       const std::optional<fs::path>& output) {
  Stopwatch sw;
  const fs::path model_p = model ? *model : require("models/model.json", "train");
  const fs::path input_p = input ? *input : require("features/test.csv", "featurize");
  const fs::path output_p = output ? *output : out_ / "predict" / "predictions.csv";
  const auto artifact = ModelArtifact::load(model_p);
  const Dataset data = read_dataset(input_p);
  const Matrix proba = artifact.predict_proba(data);
  const Labels pred = artifact.predict(data);
  std::ostringstream ss;
  ss << "row,predicted";
  for (const auto& c : artifact.classes) ss << ",p_" << c;
  ss << '\n';
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    ss << i << ',' << artifact.classes[static_cast<std::size_t>(pred[static_cast<std::size_t>(i)])];
    for (Eigen::Index c = 0; c < proba.cols(); ++c) ss << ',' << format_double(proba(i, c));
    ss << '\n';
  }
  write_file(output_p, ss.str());
  log_ << "predict: " << proba.rows() << " rows -> " << output_p.string() << "\n";
  record("predict", Json{{"inputs", {{model_p.string(), digest(model_p)}, {input_p.string(), digest(input_p)}}},
                         {"outputs", Json::array({output_p.string()})},
                         {"counts", {{"rows", proba.rows()}}},
                         {"seconds", sw.seconds()}});
}

void Pipeline::report() {
  Stopwatch sw;
  const fs::path eval = require("eval/summary.json", "evaluate").parent_path();
  const fs::path dir = out_ / "report";
  std::vector<fs::path> reports;
  for (const auto& e : fs::directory_iterator(eval)) {
    const auto name = e.path().filename().string();
    if (name.size() > 12 && name.ends_with("_report.json")) reports.push_back(e.path());
  }
  std::sort(reports.begin(), reports.end());
  std::ostringstream overview;
  char line[200];
  std::snprintf(line, sizeof line, "%-28s %10s %10s %12s\n", "model", "accuracy", "macro-f1", "high-recall");
  overview << line;
  for (const auto& p : reports) {
    const auto r = report_from_json(read_file(p));
    std::string stem = p.filename().string();
    stem = stem.substr(0, stem.size() - std::string("_report.json").size());
    write_file(dir / (stem + "_report.txt"), report_table(r));
    write_file(dir / (stem + "_confusion.csv"), confusion_csv(r));
    std::snprintf(line, sizeof line, "%-28s %10.4f %10.4f %12.4f\n", stem.c_str(), r.accuracy, r.macro.f1,
                  r.per_class.back().recall);
    overview << line;
  }
  write_file(dir / "overview.txt", overview.str());

  // Heat grid from the persisted correlation table.
  if (fs::exists(eval / "correlation.csv")) {
    const auto text = read_file(eval / "correlation.csv");
    const auto lines = split_lines(text);
    std::vector<std::string> names;
    const auto header = split_csv_line(lines.front());
    names.assign(header.begin() + 1, header.end());
    Correlation c;
    c.r.resize(static_cast<Eigen::Index>(names.size()), static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto cells = split_csv_line(lines[i + 1]);
      for (std::size_t j = 0; j < names.size(); ++j) {
        const auto v = parse_double(cells[j + 1]);
        if (!v) throw SchemaError("report: bad correlation cell in " + (eval / "correlation.csv").string());
        c.r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *v;
      }
    }
    write_file(dir / "correlation.svg", correlation_svg(c, names));
  }
  log_ << "report: " << reports.size() << " reports rendered to " << dir.string() << "\n";
  record("report", Json{{"counts", {{"reports", reports.size()}}}, {"seconds", sw.seconds()}});
}

}  // namespace bushfire
