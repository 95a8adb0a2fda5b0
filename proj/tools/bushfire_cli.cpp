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

// bushfire: command-line driver for the pipeline stages.
//
// Exit codes: 0 success, 1 validation / leakage / precondition error,
// 2 I/O or schema error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bushfire/pipeline.hpp"
#include "json.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bushfire intensity pipeline"};
  app.require_subcommand(1);

  std::optional<std::string> config_path, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("--config", config_path, "Configuration file (dotted key = value lines)");
  app.add_option("--seed", seed, "Master random seed (overrides the config)");
  app.add_option("--threads", threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Output directory (default: out)");

  std::optional<std::string> model, input, output;
  auto* ingest = app.add_subcommand("ingest", "Parse and normalize fire, weather and NDVI inputs");
  auto* fuse = app.add_subcommand("fuse", "Join fire events with station weather and NDVI");
  auto* featurize = app.add_subcommand("featurize", "Label, engineer, split and standardize");
  auto* train = app.add_subcommand("train", "Search, resample and fit models");
  auto* evaluate = app.add_subcommand("evaluate", "Score models on the test split");
  auto* predict = app.add_subcommand("predict", "Apply a model artifact to a feature file");
  predict->add_option("--model", model, "Model artifact (default: <out>/models/model.json)");
  predict->add_option("--input", input, "Feature file (default: <out>/features/test.csv)");
  predict->add_option("--output", output, "Predictions file (default: <out>/predict/predictions.csv)");
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with a planted signal");
  auto* report = app.add_subcommand("report", "Re-render tables and plots from evaluation output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    bushfire::Config config = config_path ? bushfire::Config::load(*config_path) : bushfire::Config{};
    if (seed) config.set("seed", std::to_string(*seed));
    if (threads) config.set("threads", std::to_string(*threads));
    if (out) config.set("out", *out);
    bushfire::Pipeline pipeline(std::move(config), std::cout);

    if (ingest->parsed()) pipeline.ingest();
    if (fuse->parsed()) pipeline.fuse();
    if (featurize->parsed()) pipeline.featurize();
    if (train->parsed()) pipeline.train();
    if (evaluate->parsed()) pipeline.evaluate();
    if (predict->parsed()) {
      auto path = [](const std::optional<std::string>& s) -> std::optional<std::filesystem::path> {
        if (s) return std::filesystem::path(*s);
        return std::nullopt;
      };
      pipeline.predict(path(model), path(input), path(output));
    }
    if (synth->parsed()) pipeline.synth();
    if (report->parsed()) pipeline.report();
  } catch (const bushfire::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kExitIo;
  } catch (const bushfire::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const bushfire::LeakageError& e) {
    std::cerr << "leakage error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const bushfire::ManifestError& e) {
    std::cerr << "manifest error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const bushfire::PrerequisiteError& e) {
    std::cerr << "prerequisite error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const bushfire::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const bushfire::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
