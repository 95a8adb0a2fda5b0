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


// Acceptance runner: one PASS/FAIL line per criterion. Usage:
//   bushfire_acceptance [criterion numbers...]
// With no arguments every criterion runs. Exit status is the number of
// failures (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "bushfire/ensemble.hpp"
#include "bushfire/features.hpp"
#include "bushfire/fusion.hpp"
#include "bushfire/gbdt.hpp"
#include "bushfire/geo.hpp"
#include "bushfire/logistic.hpp"
#include "bushfire/metrics.hpp"
#include "bushfire/mlp.hpp"
#include "bushfire/resample.hpp"
#include "bushfire/synth.hpp"
#include "bushfire/text.hpp"
#include "bushfire/tree.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bushfire;
namespace fs = std::filesystem;

namespace {

// Collects failed checks; the first few are echoed in the verdict line.
struct Check {
  std::vector<std::string> failures;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream ss;
      ss.precision(17);
      ss << what << ": got " << got << " want " << want;
      failures.push_back(ss.str());
    }
  }
};

// ------------------------------------------------------------------- 1

void metric_oracle(Check& c) {
  for (int k : {2, 3}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(derive_seed(1, std::uint64_t(k), seed));
      Labels t(1000), p(1000);
      for (std::size_t i = 0; i < 1000; ++i) {
        t[i] = int(rng.below(std::uint64_t(k)));
        p[i] = rng.bernoulli(0.5) ? t[i] : int(rng.below(std::uint64_t(k)));
      }
      const auto r = classification_report(t, p, std::vector<std::string>(std::size_t(k), "c"));
      const auto o = oracle::count_report(t, p, k);
      auto cmp = [&](const ClassScores& a, const oracle::Scores& b, const std::string& tag) {
        c.near(a.precision, b.precision, 1e-12, tag + " precision");
        c.near(a.recall, b.recall, 1e-12, tag + " recall");
        c.near(a.f1, b.f1, 1e-12, tag + " f1");
        c.expect(a.support == b.support, tag + " support");
      };
      for (int cl = 0; cl < k; ++cl) cmp(r.per_class[std::size_t(cl)], o.per_class[std::size_t(cl)], "class");
      cmp(r.macro, o.macro, "macro");
      cmp(r.weighted, o.weighted, "weighted");
      c.near(r.accuracy, o.accuracy, 1e-12, "accuracy");
      c.expect(r.weighted.recall == r.accuracy, "weighted recall != accuracy");
    }
  }
  c.detail << "2 schemes x 10 seeds x 1000 pairs";
}

// ------------------------------------------------------------------- 2

void auc_oracle(Check& c) {
  Rng rng(2);
  double worst = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(499);
    std::vector<double> s(n);
    Labels y(n);
    const int levels = trial % 3 == 0 ? 2 : (trial % 3 == 1 ? 5 : 0);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.bernoulli(0.4);
      s[i] = levels ? double(rng.below(std::uint64_t(levels))) : rng.normal(0.4 * y[i], 1.0);
    }
    y[0] = 0;
    y[n - 1] = 1;
    const double a = roc_auc(s, y);
    worst = std::max(worst, std::abs(a - oracle::pair_auc(s, y)));
    for (auto& v : s) v = -v;
    c.near(roc_auc(s, y), 1.0 - a, 1e-12, "AUC(-s)");
  }
  c.expect(worst <= 1e-12, "pair oracle mismatch");
  c.detail << "300 instances, max |diff| " << worst;
}

// ------------------------------------------------------------------- 3

void spatial_join(Check& c) {
  std::size_t fused = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = fixture::random_join_instance(derive_seed(3, seed));
    const auto got = fuse(inst.events, inst.weather, inst.ndvi);
    const auto want = oracle::linear_scan_join(inst.events, inst.weather, inst.ndvi, 5.0, 2.0, 8, 2.5);
    fused += got.records.size();
    const std::string tag = "instance " + std::to_string(seed);
    if (got.records.size() != want.rows.size()) {
      c.expect(false, tag + " record count");
      continue;
    }
    for (std::size_t i = 0; i < want.rows.size(); ++i) {
      const auto& g = got.records[i];
      const auto& w = want.rows[i];
      const bool same = g.event == inst.events[w.event] && g.region == w.region &&
                        g.weather == WeatherVars{w.tmin, w.tmax, w.tavg, w.prcp, w.wspd} &&
                        g.distance_m == w.distance_m && g.ndvi == w.ndvi && g.ndvi_lag_days == w.lag;
      c.expect(same, tag + " record " + std::to_string(i));
      c.expect(g.distance_m <= 5000.0 && std::abs(g.ndvi_lag_days) <= 8, tag + " bound violated");
    }
    for (const auto& [cause, n] : want.excluded) c.expect(got.exclusions.count(cause) == n, tag + " " + cause);
  }
  c.detail << "50 instances, " << fused << " fused records";
}

// ------------------------------------------------------------------- 4

void idw_properties(Check& c) {
  Rng rng(4);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    std::vector<DistanceValue<double>> s(n);
    for (auto& v : s) v = {rng.uniform(1e-3, 5.0), rng.normal(0, 50)};
    const double r = idw<double>(s);
    double lo = s[0].value, hi = s[0].value;
    for (const auto& v : s) lo = std::min(lo, v.value), hi = std::max(hi, v.value);
    c.expect(r >= lo && r <= hi, "boundedness");
    c.expect(idw<double>({s[0]}) == s[0].value, "single station");
    auto z = s;
    const std::size_t k = rng.below(n);
    z[k].distance = 0.0;
    c.expect(idw<double>(z) == z[k].value, "zero distance");
  }
  c.expect(idw<double>({{1.0, 0.0}, {2.0, 30.0}}) == 6.0, "worked example");
  c.detail << "10000 draws; [(1,0),(2,30)] -> " << idw<double>({{1.0, 0.0}, {2.0, 30.0}});
}

// ------------------------------------------------------------------- 5

void smote_tomek_checks(Check& c) {
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(5, seed));
    const int n = 300 + int(rng.below(300));
    Matrix x(n, 3);
    Labels y(std::size_t(n), 0);
    for (int i = 0; i < n; ++i) {
      y[std::size_t(i)] = rng.uniform() < 0.1;
      for (int j = 0; j < 3; ++j) x(i, j) = rng.normal(y[std::size_t(i)] * 1.0, 1.0);
    }
    const auto before = class_counts(y, 2);
    if (before[1] <= 5) continue;
    const double ratio = seed % 2 ? 1.0 : 0.6;
    ResampleConfig rc{.k_neighbors = 5, .target_ratio = ratio, .tomek_policy = TomekPolicy::kRemoveBoth,
                      .seed = seed, .threads = 1};
    const auto over = smote(x, y, rc);
    c.expect(class_counts(over.y, 2)[1] == std::size_t(std::ceil(ratio * double(before[0]))), "minority count");
    Indices minority;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i]) minority.push_back(i);
    const Matrix pool = take_rows(x, minority);
    for (Eigen::Index r = x.rows(); r < over.x.rows(); ++r)
      worst = std::max(worst, oracle::segment_residual(over.x.row(r), pool));
    ResampleSummary summary;
    const auto cleaned = smote_tomek(x, y, rc, &summary);
    c.expect(oracle::count_tomek_links(cleaned.x, cleaned.y) == 0, "Tomek links remain");
    auto rc8 = rc;
    rc8.threads = 8;
    const auto again = smote_tomek(x, y, rc8);
    c.expect(again.x == cleaned.x && again.y == cleaned.y, "thread count changed output");
  }
  c.expect(worst <= 1e-9, "convex-combination residual");
  c.detail << "10 instances, max residual " << worst;
}

// ------------------------------------------------------------------- 6

void tree_gbdt(Check& c) {
  Rng rng(6);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + int(rng.below(199)), d = 1 + int(rng.below(5)), k = 2 + int(rng.below(2));
    Matrix x(n, d);
    Labels y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      y[std::size_t(i)] = int(rng.below(std::uint64_t(k)));
      for (int j = 0; j < d; ++j) x(i, j) = std::round(rng.normal(0.3 * y[std::size_t(i)], 1.0) * 4) / 4;
    }
    std::vector<double> w(std::size_t(n), 1.0);
    Indices rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<int> features(static_cast<std::size_t>(d));
    std::iota(features.begin(), features.end(), 0);
    const auto got = best_gini_split(x, y, w, rows, features, k, 1);
    const auto all = oracle::all_gini_candidates(x, y, w, k, 1);
    if (all.empty()) {
      c.expect(got.feature < 0, "split found where none exists");
      continue;
    }
    double best = -1;
    for (const auto& cand : all) best = std::max(best, cand.gain);
    worst = std::max(worst, std::abs(best - got.gain));
  }
  c.expect(worst <= 1e-12, "Gini gain mismatch");

  Matrix x(8, 2);
  x << 1, 5, 2, 3, 3, 8, 4, 1, 5, 7, 6, 2, 7, 6, 8, 4;
  const Labels y = {0, 0, 1, 0, 1, 1, 0, 1};
  GbdtParams p;
  p.growth = Growth::kDepthWise;
  p.n_estimators = 2;
  p.learning_rate = 0.3;
  p.max_depth = 1;
  p.min_samples_leaf = 1;
  const auto m = Gbdt::fit(x, y, p);
  const auto hand = oracle::hand_boost_stumps(x, y, 2, 0.3, 1.0);
  double leaf_err = 0;
  for (std::size_t r = 0; r < 2; ++r) {
    const auto& t = m.trees()[0][r];
    c.expect(t.size() == 3 && t[0].feature == hand[r].feature && t[0].threshold == hand[r].threshold,
             "stump structure");
    if (t.size() == 3)
      leaf_err = std::max({leaf_err, std::abs(t[1].value - hand[r].left_value),
                           std::abs(t[2].value - hand[r].right_value)});
  }
  c.expect(leaf_err <= 1e-9, "hand leaf values");

  std::size_t rounds = 0;
  for (Growth g : {Growth::kDepthWise, Growth::kLeafWise}) {
    const auto s = synth_fused({.rows = 3000, .ratio = 0.2, .signal = 1.0, .seed = 6});
    const auto f = featurize(s.records, {});
    GbdtParams q;
    q.growth = g;
    q.n_estimators = 100;
    const auto model = Gbdt::fit(f.train.x, f.train.y, q);
    const auto& loss = model.train_loss();
    for (std::size_t i = 1; i < loss.size(); ++i) c.expect(loss[i] <= loss[i - 1], "train loss increased");
    rounds += loss.size();
  }
  c.detail << "Gini max |diff| " << worst << "; hand GBDT leaf err " << leaf_err << "; " << rounds
           << " monotone rounds";
}

// ------------------------------------------------------------------- 7

void gradient_checks(Check& c) {
  Rng rng(7);
  double mlp_err = 0, lr_err = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x(4, 3);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal(0, 1);
    const Labels y = {0, 1, 0, 1};
    const auto sizes = mlp_layer_sizes(3, {3}, 2);
    Vector theta(mlp_parameter_count(sizes));
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = rng.normal(0, 0.7);
    const Activation act = trial % 2 ? Activation::kRelu : Activation::kTanh;
    Vector g;
    mlp_loss(sizes, act, theta, x, y, 1e-3, &g);
    const auto fd =
        oracle::finite_difference([&](const Vector& th) { return mlp_loss(sizes, act, th, x, y, 1e-3); }, theta, 1e-6);
    mlp_err = std::max(mlp_err, oracle::max_relative_error(g, fd, 1e-7));

    Matrix xl(25, 3);
    for (Eigen::Index i = 0; i < xl.size(); ++i) xl.data()[i] = rng.normal(0, 1);
    Vector t(25);
    for (Eigen::Index i = 0; i < 25; ++i) t(i) = rng.bernoulli(0.5);
    Vector th(4);
    for (Eigen::Index i = 0; i < 4; ++i) th(i) = rng.normal(0, 1);
    Vector gl;
    logistic_objective(xl, t, th, 0.05, &gl);
    const auto fl = oracle::finite_difference([&](const Vector& v) { return logistic_objective(xl, t, v, 0.05); }, th, 1e-5);
    lr_err = std::max(lr_err, oracle::max_relative_error(gl, fl, 1e-6));
  }
  c.expect(mlp_err <= 1e-4, "MLP gradient");
  c.expect(lr_err <= 1e-6, "logistic gradient");
  c.detail << "max relative error MLP " << mlp_err << ", logistic " << lr_err;
}

// ------------------------------------------------------------------- 8

void vif_correlation(Check& c) {
  Rng rng(8);
  double vif_err = 0, corr_err = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Matrix x(50, 4);
    for (Eigen::Index i = 0; i < 50; ++i) {
      const double z = rng.normal(0, 1);
      x.row(i) << z + rng.normal(0, 0.4), rng.normal(0, 1), z + rng.normal(0, 1), rng.normal(1, 2);
    }
    const Vector v = vif(x), o = oracle::vif_normal_equations(x);
    for (Eigen::Index j = 0; j < 4; ++j) vif_err = std::max(vif_err, std::abs(v(j) - o(j)));
    corr_err = std::max(corr_err, (correlation_matrix(x).r - oracle::covariance_correlation(x)).cwiseAbs().maxCoeff());
  }
  c.expect(vif_err <= 1e-6, "VIF");
  c.expect(corr_err <= 1e-12, "correlation");

  Matrix dup(50, 3);
  for (Eigen::Index i = 0; i < dup.size(); ++i) dup.data()[i] = rng.normal(0, 1);
  dup.col(2) = dup.col(0);
  const Vector vd = vif(dup);
  c.expect(vd(0) == kVifInfinity && vd(2) == kVifInfinity, "duplicate column sentinel");

  Matrix orth(8, 3);
  orth << 1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, 1, 1, 1, -1, -1, 1, 1, 1, -1, 1, -1, -1, -1;
  const Vector vo = vif(orth);
  for (Eigen::Index j = 0; j < 3; ++j) c.near(vo(j), 1.0, 1e-9, "orthogonal VIF");
  c.detail << "VIF max |diff| " << vif_err << ", correlation max |diff| " << corr_err;
}

// ------------------------------------------------------------------- 9

void threshold_checks(Check& c) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng.below(60);
    std::vector<double> p(n);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.bernoulli(0.35);
      p[i] = trial % 2 ? double(rng.below(21)) / 20 : std::clamp(rng.normal(0.3 + 0.3 * y[i], 0.25), 0.0, 1.0);
    }
    y[0] = 0;
    y[1] = 1;
    const auto got = optimize_threshold(p, y);
    const auto want = oracle::threshold_grid(p, y);
    c.expect(got.threshold == want.threshold, "threshold " + std::to_string(trial));
    c.near(got.f1, want.f1, 1e-12, "F1");
  }
  const std::vector<double> eq = {0, 1, 0, 1, 1};
  const auto tie = optimize_threshold(eq, Labels{0, 1, 0, 1, 1});
  c.expect(tie.threshold == 0.01, "tie rule");
  bool leak = false;
  try {
    optimize_threshold(eq, Labels{0, 1, 0, 1, 1}, DataRole::kTest);
  } catch (const LeakageError&) {
    leak = true;
  }
  c.expect(leak, "test role accepted");
  c.detail << "100 vectors; probs==labels picks " << tie.threshold;
}

// ------------------------------------------------------------------ 10

double macro_f1(const Labels& truth, const Labels& pred) {
  return classification_report(truth, pred, {"low", "high"}).macro.f1;
}

double high_recall(const Labels& truth, const Labels& pred) {
  return classification_report(truth, pred, {"low", "high"}).per_class[1].recall;
}

Labels at(const Matrix& proba, double t) { return apply_threshold(proba, t); }

double oof_threshold(const Vector& p, const Labels& y) {
  return optimize_threshold(std::span<const double>(p.data(), std::size_t(p.size())), y, DataRole::kValidation)
      .threshold;
}

void benchmark(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const auto data = synth_fused({.rows = 52116, .ratio = 0.053, .signal = 1.0, .seed = 20240601});
  const auto f = featurize(data.records, {});

  StackConfig sc;
  sc.base = {{"forest", Json{{"n_trees", 60}, {"max_depth", 12}, {"min_samples_leaf", 5}}},
             {"gbdt", Json{{"growth", "leaf_wise"}, {"n_estimators", 150}, {"learning_rate", 0.05}}}};
  sc.n_folds = 5;
  sc.seed = 7;
  const auto fit = fit_stack(f.train.x, f.train.y, sc);
  const double t_stack = oof_threshold(fit.oof_proba.col(1), f.train.y);

  const Matrix p_stack = fit.model->predict_proba(f.test.x);
  const double stack_f1 = macro_f1(f.test.y, at(p_stack, t_stack));
  const double recall_opt = high_recall(f.test.y, at(p_stack, t_stack));
  const double recall_half = high_recall(f.test.y, at(p_stack, 0.5));

  // Each base learner gets its best of the default 0.5 cut and its own
  // cross-validated threshold.
  double best_base = 0;
  std::string best_name;
  for (std::size_t b = 0; b < fit.model->base().size(); ++b) {
    const auto& m = fit.model->base()[b];
    const Matrix p = m->predict_proba(f.test.x);
    const double t = oof_threshold(fit.oof_meta.col(Eigen::Index(b)), f.train.y);
    const double score = std::max(macro_f1(f.test.y, at(p, 0.5)), macro_f1(f.test.y, at(p, t)));
    if (score > best_base) {
      best_base = score;
      best_name = m->family();
    }
  }
  const auto majority = PriorClassifier::fit(f.train.y);
  const double majority_f1 = macro_f1(f.test.y, argmax_rows(majority.predict_proba(f.test.x)));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  c.expect(recall_opt > recall_half, "optimized-threshold recall does not exceed 0.5 recall");
  c.expect(stack_f1 - best_base >= 0.0, "stack below best base learner");
  c.expect(stack_f1 - majority_f1 >= 0.15, "margin over majority baseline < 0.15");
  c.expect(seconds <= 300.0, "runtime over 5 minutes");
  c.detail.precision(4);
  c.detail << "t=" << t_stack << " recall " << recall_opt << " vs " << recall_half << " at 0.5; macro-F1 stack "
           << stack_f1 << ", best base (" << best_name << ") " << best_base << ", majority " << majority_f1 << "; "
           << seconds << " s";
}

// ------------------------------------------------------------------ 11

int run(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> eval_files(const fs::path& out) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(out / "eval")) files[e.path().filename().string()] = read_file(e.path());
  return files;
}

void determinism(Check& c) {
  const fs::path root = fs::temp_directory_path() / "bushfire_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  write_file(root / "run.conf", "seed = 42\nsynth.rows = 3000\nsynth.ratio = 0.1\n");
  std::vector<std::map<std::string, std::string>> runs;
  for (int threads : {1, 1, 8, 8}) {
    const fs::path out = root / ("run" + std::to_string(runs.size()));
    const std::string base = std::string(BUSHFIRE_CLI) + " --config " + (root / "run.conf").string() + " --out " +
                             out.string() + " --threads " + std::to_string(threads) + " ";
    bool ok = true;
    for (const char* stage : {"synth", "featurize", "train", "evaluate"}) ok = ok && run(base + stage) == 0;
    c.expect(ok, "pipeline run failed");
    if (!ok) return;
    runs.push_back(eval_files(out));
  }
  for (std::size_t i = 1; i < runs.size(); ++i) c.expect(runs[i] == runs[0], "run " + std::to_string(i) + " differs");
  c.detail << runs[0].size() << " metric files compared over 4 runs (threads 1,1,8,8)";
}

// ------------------------------------------------------------------ 12

void feature_identities(Check& c) {
  const double h = std::sqrt(3.0) / 2.0;
  c.expect(encode_month(3) == std::make_pair(1.0, 0.0), "month 3");
  c.expect(encode_month(6) == std::make_pair(0.0, -1.0), "month 6");
  c.expect(encode_month(12) == std::make_pair(0.0, 1.0), "month 12");
  c.expect(encode_month(1) == std::make_pair(0.5, h), "month 1");
  const auto scheme = LabelScheme::two_class();
  c.expect(label(40.0, scheme) == 0, "40.0 labels low");
  c.expect(label(40.01, scheme) == 1, "40.01 labels high");
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(1 + rng.below(2000));
    for (auto& x : v) x = rng.exponential(60);
    const auto once = cap_percentile(v, 0.99);
    c.expect(apply_cap(once.values, once.cap) == once.values, "capping not idempotent");
  }
  c.detail << "months {3,6,12}, FRP 40.0/40.01, fitted cap re-applied on 100 draws";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"metric oracle equivalence", metric_oracle},
      {"ROC-AUC pair oracle", auc_oracle},
      {"spatial join equivalence", spatial_join},
      {"IDW properties", idw_properties},
      {"SMOTE-Tomek", smote_tomek_checks},
      {"tree/GBDT correctness", tree_gbdt},
      {"gradient checks", gradient_checks},
      {"VIF and correlation", vif_correlation},
      {"threshold optimization", threshold_checks},
      {"synthetic benchmark", benchmark},
      {"end-to-end determinism", determinism},
      {"feature identities", feature_identities},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = int(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool pass = c.failures.empty();
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first << " ("
              << c.detail.str() << ")";
    if (!pass) {
      std::cout << " -- " << c.failures.size() << " failed check(s), first: " << c.failures.front();
    }
    std::cout << std::endl;
  }
  return failed ? 1 : 0;
}
