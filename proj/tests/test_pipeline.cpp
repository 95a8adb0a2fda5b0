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

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <sys/wait.h>

#include "bushfire/config.hpp"
#include "bushfire/fusion.hpp"
#include "bushfire/ingest.hpp"
#include "bushfire/pipeline.hpp"
#include "bushfire/synth.hpp"
#include "bushfire/text.hpp"

using namespace bushfire;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bushfire_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Small models so the whole chain runs in a few seconds.
const char* kFastModels =
    "synth.rows = 600\n"
    "synth.ratio = 0.15\n"
    "stack.n_folds = 3\n"
    "model.forest.n_trees = 15\n"
    "model.forest.max_depth = 8\n"
    "model.gbdt_leaf.n_estimators = 30\n";

Config fast_config(const fs::path& out, int threads = 1) {
  auto c = Config::parse(kFastModels);
  c.set("seed", "11");
  c.set("out", out.string());
  c.set("threads", std::to_string(threads));
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BUSHFIRE_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ParsesAndRejectsUnknownKeys) {
  const auto c = Config::parse("# comment\nseed = 3\nstack.base = forest, gbdt_depth\nmodel.mlp.alpha = 0.01\n");
  EXPECT_EQ(c.integer("seed", 0), 3);
  EXPECT_EQ(c.list("stack.base", {}), (std::vector<std::string>{"forest", "gbdt_depth"}));
  EXPECT_EQ(c.section("model.mlp").at("alpha"), "0.01");
  EXPECT_THROW(Config::parse("sede = 3\n"), PreconditionError);
  EXPECT_THROW(Config::parse("seed = 3\nseed = 4\n"), PreconditionError);
  EXPECT_THROW(Config::parse("seed 3\n"), PreconditionError);
}

TEST(Config, HashIgnoresThreadsAndOut) {
  auto a = Config::parse("seed = 1\nthreads = 1\nout = a\n");
  auto b = Config::parse("seed = 1\nthreads = 8\nout = b\n");
  EXPECT_EQ(a.hash(), b.hash());
  b.set("seed", "2");
  EXPECT_NE(a.hash(), b.hash());
}

TEST(Synth, HitsTargetRatioAndIsSeeded) {
  const SynthSpec spec{.rows = 20000, .ratio = 0.053, .signal = 1.0, .seed = 4};
  const auto a = synth_fused(spec);
  double mean_p = 0;
  std::size_t high = 0;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    mean_p += a.p_high[i];
    high += a.records[i].event.frp > 40.0;
  }
  EXPECT_NEAR(mean_p / double(a.records.size()), 0.053, 1e-9);
  EXPECT_NEAR(double(high) / double(a.records.size()), 0.053, 0.01);
  EXPECT_EQ(synth_fused(spec).records, a.records);
}

TEST(Synth, ZeroSignalMakesLabelsIndependent) {
  const auto a = synth_fused({.rows = 3000, .ratio = 0.3, .signal = 0.0, .seed = 1});
  for (double p : a.p_high) EXPECT_NEAR(p, 0.3, 1e-9);
}

TEST(Synth, RawFilesFuseBackToRequestedRows) {
  const auto raw = synth_raw({.rows = 300, .ratio = 0.2, .signal = 1.0, .seed = 2});
  const auto f = parse_fire_events_text(raw.fire_csv);
  const auto w = parse_weather_text(raw.weather_csv);
  const auto n = parse_ndvi_text(raw.ndvi_csv);
  EXPECT_GT(f.drops.dropped(), 0u);
  EXPECT_GT(w.drops.dropped(), 0u);
  EXPECT_GT(n.drops.dropped(), 0u);
  const auto fused = fuse(f.records, w.records, n.records);
  EXPECT_EQ(fused.records.size(), 300u);
  EXPECT_GT(fused.exclusions.excluded(), 0u);
}

TEST(Pipeline, SeedIsMandatory) {
  std::ostringstream log;
  EXPECT_THROW(Pipeline(Config::parse("out = x\n"), log), PreconditionError);
}

TEST(Pipeline, MissingPrerequisiteNamesTheStage) {
  const auto out = scratch("prereq");
  std::ostringstream log;
  Pipeline p(fast_config(out), log);
  try {
    p.train();
    FAIL() << "expected PrerequisiteError";
  } catch (const PrerequisiteError& e) {
    EXPECT_NE(std::string(e.what()).find("featurize"), std::string::npos);
  }
}

TEST(Pipeline, EndToEndWritesEveryArtifact) {
  const auto out = scratch("e2e");
  std::ostringstream log;
  Pipeline p(fast_config(out), log);
  p.synth();
  p.featurize();
  p.train();
  p.evaluate();
  p.report();
  p.predict(std::nullopt, std::nullopt, std::nullopt);
  for (const char* f : {"fuse/fused.csv", "features/train.csv", "features/test.csv", "features/scaler.json",
                        "features/audit.txt", "models/model.json", "models/threshold_curve.csv",
                        "eval/summary.json", "eval/vif.csv", "eval/correlation.csv", "eval/correlation.svg",
                        "report/overview.txt", "predict/predictions.csv", "manifest.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  const auto model = ModelArtifact::load(out / "models" / "model.json");
  EXPECT_EQ(model.family, "stack");
  ASSERT_TRUE(model.threshold);
  const auto summary = nlohmann::json::parse(read_file(out / "eval" / "summary.json"));
  EXPECT_TRUE(summary.dump().find("seconds") == std::string::npos);
}

TEST(Pipeline, ReportsAreIdenticalAcrossThreadCounts) {
  std::map<int, std::map<std::string, std::string>> files;
  for (int threads : {1, 8}) {
    const auto out = scratch("det" + std::to_string(threads));
    std::ostringstream log;
    Pipeline p(fast_config(out, threads), log);
    p.synth();
    p.featurize();
    p.train();
    p.evaluate();
    for (const auto& e : fs::directory_iterator(out / "eval"))
      files[threads][e.path().filename().string()] = read_file(e.path());
  }
  EXPECT_FALSE(files[1].empty());
  EXPECT_EQ(files[1], files[8]);
}

TEST(Pipeline, ManifestMismatchIsRejected) {
  const auto out = scratch("manifest");
  std::ostringstream log;
  auto c = fast_config(out);
  Pipeline p(c, log);
  p.synth();
  p.featurize();
  p.train();
  const auto other = scratch("manifest_other");
  auto c2 = fast_config(other);
  c2.set("features.raw_weather", "true");
  c2.set("input.fused", (out / "fuse" / "fused.csv").string());
  Pipeline p2(c2, log);
  p2.featurize();
  EXPECT_THROW(p.predict(std::nullopt, other / "features" / "test.csv", std::nullopt), ManifestError);
}

TEST(Cli, ExitCodes) {
  const auto out = scratch("cli");
  const auto cfg = out / "run.conf";
  write_file(cfg, std::string(kFastModels) + "seed = 5\n");
  const std::string base = "--config " + cfg.string() + " --out " + (out / "o").string();

  EXPECT_EQ(run_cli("--out " + out.string() + " synth"), 1);               // no seed
  EXPECT_EQ(run_cli(base + " train"), 1);                                  // featurize not run
  EXPECT_EQ(run_cli("--config " + (out / "missing.conf").string() + " synth"), 2);
  EXPECT_EQ(run_cli(base + " synth"), 0);
  EXPECT_EQ(run_cli(base + " featurize"), 0);
  EXPECT_EQ(run_cli(base + " --threads 2 train"), 0);
  EXPECT_EQ(run_cli(base + " evaluate"), 0);
  EXPECT_EQ(run_cli(base + " report"), 0);
  EXPECT_EQ(run_cli(base + " predict"), 0);
  EXPECT_EQ(run_cli(base + " frobnicate"), 1);

  write_file(out / "bad.conf", "seed = 1\nunknown.key = 2\n");
  EXPECT_EQ(run_cli("--config " + (out / "bad.conf").string() + " synth"), 1);

  write_file(out / "fire.csv", "lat,lon\n1,2\n");
  write_file(out / "weather.csv", "station_id,region,latitude,longitude,date,tmin,tmax,tavg,prcp,wspd\n");
  write_file(out / "ndvi.csv", "latitude,longitude,composite_date,ndvi\n");
  write_file(out / "ingest.conf", "seed = 1\ninput.fire = " + (out / "fire.csv").string() +
                                      "\ninput.weather = " + (out / "weather.csv").string() +
                                      "\ninput.ndvi = " + (out / "ndvi.csv").string() + "\n");
  EXPECT_EQ(run_cli("--config " + (out / "ingest.conf").string() + " --out " + (out / "i").string() + " ingest"), 2);
}
