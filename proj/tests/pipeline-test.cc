// tests/pipeline-test.cc

// Copyright 2026  The audkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <string>

#include "aud/pipeline.h"
#include "test-util.h"

namespace aud {
namespace {

ExperimentConfig small_config(RunMode mode) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  cfg.synth.n_phones = 8;
  cfg.synth.dim = 6;
  cfg.synth.n_utts = 12;
  cfg.synth.phones_per_utt = {4, 10};
  cfg.synth.dur_frames = {3, 9};
  cfg.synth.noise_sigma = 1.0;
  cfg.synth.seed = 4;
  cfg.kmeans.k = 8;
  cfg.kmeans.seed = 2;
  cfg.reps = 3;
  return cfg;
}

TEST_CASE("config text parsing") {
  const ConfigMap m = parse_config_text(
      "# comment\n[cluster]\nk = 30\nreps=2\n\n[embed]\nmethod = \"ds\"\ns = 3\n");
  CHECK(m.at("cluster.k") == "30");
  CHECK(m.at("cluster.reps") == "2");
  CHECK(m.at("embed.method") == "ds");
  const ExperimentConfig cfg = resolve_config(m);
  CHECK(cfg.kmeans.k == 30);
  CHECK(cfg.reps == 2);
  CHECK(cfg.embed.method == EmbedMethod::kDownsample);
  CHECK(cfg.embed.s == 3);

  CHECK_THROWS_AS(parse_config_text("k = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[cluster]\nk 3\n"), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"cluster.kk", "3"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"cluster.k", "three"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"cluster.k", "0"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"embed.method", "max"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"run.mode", "oracle"}}), ConfigError);
  try {
    parse_config_text("[a]\nx = 1\nbroken\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("every described key resolves back to the same configuration") {
  ExperimentConfig cfg = small_config(RunMode::kFrame);
  cfg.embed = {EmbedMethod::kDownsample, 4};
  cfg.frame_shift_ms = 12.5;
  cfg.k_values = {5, 7};
  ConfigMap m;
  for (const auto &[k, v] : describe_config(cfg)) m[k] = v;
  for (const auto &[k, v] : m)
    CHECK(std::find(known_config_keys().begin(), known_config_keys().end(), k) !=
          known_config_keys().end());
  CHECK(describe_config(resolve_config(m)) == describe_config(cfg));
  for (const auto &[k, v] : describe_config(cfg)) CHECK(k != "cluster.workers");
}

TEST_CASE("upperbound on a noiseless corpus is perfect") {
  ExperimentConfig cfg = small_config(RunMode::kUpperbound);
  cfg.synth.noise_sigma = 0.0;
  cfg.merge_adjacent = false;
  const EvalReport r = run_experiment(cfg);
  REQUIRE(r.per_rep.size() == 3);
  for (const auto &row : r.per_rep) {
    CHECK(row.nmi_pct == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(row.fscore_pct == 100.0);
    CHECK(row.precision_pct == 100.0);
    CHECK(row.recall_pct == 100.0);
    CHECK(row.inertia == 0.0);
  }
}

TEST_CASE("segment mode on an uncorrupted label stream equals the upperbound") {
  ExperimentConfig seg = small_config(RunMode::kSegment);
  ExperimentConfig up = small_config(RunMode::kUpperbound);
  const EvalReport a = run_experiment(seg), b = run_experiment(up);
  CHECK(a.per_rep == b.per_rep);
}

TEST_CASE("reference boundary count matches an independent count on the gold alignment") {
  const ExperimentConfig cfg = small_config(RunMode::kSegment);
  const ExperimentData data = load_experiment_data(cfg);
  double n_ref = 0;
  for (const auto &a : data.gold)
    for (std::size_t i = 1; i < a.entries.size(); ++i) n_ref += a.entries[i].label != a.entries[i - 1].label;
  const EvalReport r = run_experiment(cfg, data);
  for (const auto &row : r.per_rep) CHECK(row.n_ref_boundaries == n_ref);
}

TEST_CASE("frame mode proposes at least as many boundaries as segment mode") {
  ExperimentConfig seg = small_config(RunMode::kSegment);
  seg.synth.noise_sigma = 8.0;
  seg.synth.dur_frames = {4, 10};
  ExperimentConfig frame = seg;
  frame.mode = RunMode::kFrame;
  const ExperimentData data = load_experiment_data(seg);
  const EvalReport a = run_experiment(seg, data), b = run_experiment(frame, load_experiment_data(frame));
  CHECK(b.mean.n_hyp_boundaries >= a.mean.n_hyp_boundaries);
  CHECK(b.mean.precision_pct < a.mean.precision_pct);
  CHECK(load_experiment_data(frame).labels.empty());
}

TEST_CASE("merging adjacent units never adds boundaries") {
  ExperimentConfig on = small_config(RunMode::kSegment);
  on.corruption.jitter_frames = 2;
  on.corruption.substitution_rate = 0.2;
  ExperimentConfig off = on;
  off.merge_adjacent = false;
  const ExperimentData data = load_experiment_data(on);
  const EvalReport a = run_experiment(on, data), b = run_experiment(off, data);
  for (std::size_t r = 0; r < a.per_rep.size(); ++r) {
    CHECK(a.per_rep[r].n_hyp_boundaries <= b.per_rep[r].n_hyp_boundaries);
    CHECK(a.per_rep[r].nmi_pct == b.per_rep[r].nmi_pct);
    CHECK(a.per_rep[r].inertia == b.per_rep[r].inertia);
  }
}

TEST_CASE("sweep cells equal single runs; duplicate k is rejected") {
  const ExperimentConfig cfg = small_config(RunMode::kSegment);
  const ExperimentData data = load_experiment_data(cfg);
  const std::vector<int> ks{4, 8};
  const SweepTable table = run_sweep(cfg, ks, data);
  REQUIRE(table.size() == 2);
  ExperimentConfig at = cfg;
  at.kmeans.k = 4;
  CHECK(table[0].first == 4);
  CHECK(table[0].second.per_rep == run_experiment(at, data).per_rep);
  const std::vector<int> dup{4, 4};
  CHECK_THROWS_AS(run_sweep(cfg, dup, data), DuplicateKeyError);
}

TEST_CASE("results do not depend on the worker count") {
  ExperimentConfig one = small_config(RunMode::kSegment);
  one.corruption.jitter_frames = 1;
  one.embed = {EmbedMethod::kDownsample, 2};
  ExperimentConfig many = one;
  many.workers = 4;
  const EvalReport a = run_experiment(one), b = run_experiment(many);
  CHECK(eval_report_to_json(a) == eval_report_to_json(b));
  CHECK(a.config.seeds.size() == 3);
}

TEST_CASE("file-based inputs reproduce the in-memory run") {
  ExperimentConfig cfg = small_config(RunMode::kSegment);
  cfg.corruption.jitter_frames = 2;
  const ExperimentData data = load_experiment_data(cfg);
  testing::TempDir dir;
  write_feature_archive(data.features, dir / "f.audf");
  serialize_alignment(data.gold, dir / "gold.ali");
  serialize_alignment(data.labels, dir / "labels.ali");
  ExperimentConfig files = cfg;
  files.features_path = (dir / "f.audf").string();
  files.gold_path = (dir / "gold.ali").string();
  files.labels_path = (dir / "labels.ali").string();
  CHECK(run_experiment(files).per_rep == run_experiment(cfg, data).per_rep);

  // Corruption applied to a gold file matches the synthesized label stream.
  files.labels_path.clear();
  CHECK(load_experiment_data(files).labels == data.labels);
}

TEST_CASE("errors carry the stage that raised them") {
  testing::TempDir dir;
  testing::spit(dir / "bad.audf", "nope");
  ExperimentConfig cfg = small_config(RunMode::kSegment);
  cfg.features_path = (dir / "bad.audf").string();
  cfg.gold_path = (dir / "missing.ali").string();
  try {
    load_experiment_data(cfg);
    FAIL("expected FormatError");
  } catch (const FormatError &e) {
    CHECK(std::string(e.what()).find("features") != std::string::npos);
  }

  ExperimentConfig big_k = small_config(RunMode::kUpperbound);
  big_k.kmeans.k = 100000;
  CHECK_THROWS_AS(run_experiment(big_k), InsufficientSamplesError);
  ExperimentConfig no_gold = small_config(RunMode::kSegment);
  no_gold.features_path = "x.audf";
  CHECK_THROWS_AS(no_gold.validate(), ConfigError);
}

}  // namespace
}  // namespace aud
