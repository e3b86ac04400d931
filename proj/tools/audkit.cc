// tools/audkit.cc

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

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "aud/eval-report.h"
#include "aud/feature-io.h"
#include "aud/kmeans.h"
#include "aud/pipeline.h"
#include "aud/segment-embed.h"
#include "aud/segmenter.h"
#include "aud/synth-corpus.h"
#include "aud/unit-eval.h"

namespace {

using namespace aud;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

/// Flags that map one-to-one onto config keys.  Values given on the command
/// line override the config file.
class Overrides {
 public:
  void add(CLI::App *app, const std::string &flag, const std::string &key,
           const std::string &help) {
    auto &slot = values_[key];
    app->add_option(flag, slot, help + " [" + key + "]");
  }

  /// Registers the generic `--set section.key=value` option.
  void add_set(CLI::App *app) {
    app->add_option("--set", sets_, "Override any config key, e.g. --set cluster.k=40");
  }

  void apply(ConfigMap &map) const {
    for (const auto &[key, value] : values_)
      if (!value.empty()) map[key] = value;
    for (const auto &s : sets_) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + s);
      map[s.substr(0, eq)] = s.substr(eq + 1);
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> sets_;
};

void add_synth_flags(CLI::App *app, Overrides &o) {
  o.add(app, "--n-phones", "synth.n_phones", "Number of phones");
  o.add(app, "--dim", "synth.dim", "Feature dimension");
  o.add(app, "--n-utts", "synth.n_utts", "Number of utterances");
  o.add(app, "--phones-per-utt-min", "synth.phones_per_utt_min", "Fewest phones per utterance");
  o.add(app, "--phones-per-utt-max", "synth.phones_per_utt_max", "Most phones per utterance");
  o.add(app, "--dur-frames-min", "synth.dur_frames_min", "Shortest phone, frames");
  o.add(app, "--dur-frames-max", "synth.dur_frames_max", "Longest phone, frames");
  o.add(app, "--noise-sigma", "synth.noise_sigma", "Frame noise standard deviation");
  o.add(app, "--centroid-scale", "synth.centroid_scale", "Centroid coordinate range");
  o.add(app, "--synth-seed", "synth.seed", "Corpus seed");
}

void add_corrupt_flags(CLI::App *app, Overrides &o) {
  o.add(app, "--jitter-frames", "corrupt.jitter_frames", "Maximum boundary displacement");
  o.add(app, "--substitution-rate", "corrupt.substitution_rate", "Label substitution probability");
  o.add(app, "--min-dur-frames", "corrupt.min_dur_frames", "Shortest segment after jitter");
  o.add(app, "--corrupt-seed", "corrupt.seed", "Corruption seed");
}

void add_embed_flags(CLI::App *app, Overrides &o) {
  o.add(app, "--method", "embed.method", "Segment embedding: avg|ds");
  o.add(app, "--s", "embed.s", "Sub-segments for ds");
  o.add(app, "--znorm", "embed.znorm", "Z-normalize features first: true|false");
}

void add_cluster_flags(CLI::App *app, Overrides &o) {
  o.add(app, "--k", "cluster.k", "Number of clusters");
  o.add(app, "--reps", "cluster.reps", "k-means repetitions");
  o.add(app, "--seed", "cluster.seed", "k-means seed");
  o.add(app, "--init", "cluster.init", "Initialization: kmeanspp|random");
  o.add(app, "--max-iter", "cluster.max_iter", "Lloyd iteration cap");
  o.add(app, "--tol", "cluster.tol", "Centroid shift tolerance (0: run to fixed point)");
  o.add(app, "--workers", "cluster.workers", "Worker threads");
}

void add_eval_flags(CLI::App *app, Overrides &o) {
  o.add(app, "--tolerance-ms", "eval.tolerance_ms", "Boundary tolerance in ms");
  o.add(app, "--frame-shift-ms", "eval.frame_shift_ms", "Frame shift in ms");
  o.add(app, "--nmi-norm", "eval.nmi_norm", "NMI normalization: arith|ref|joint");
  o.add(app, "--boundary-average", "eval.boundary_average", "Recall/precision average: micro|macro");
  o.add(app, "--matching", "eval.matching", "Boundary matching: greedy|optimal");
}

void add_run_flags(CLI::App *app, Overrides &o) {
  o.add(app, "--mode", "run.mode", "segment|frame|upperbound");
  o.add(app, "--merge-adjacent", "run.merge_adjacent", "Merge adjacent identical units: true|false");
  o.add(app, "--features", "io.features", "AUDF feature archive (synthesize when absent)");
  o.add(app, "--gold", "io.gold", "Gold phone alignment");
  o.add(app, "--labels", "io.labels", "Frame label stream (corrupt gold when absent)");
  o.add(app, "--report", "io.report", "EvalReport JSON output");
  o.add(app, "--table", "io.table", "Text table output");
}

ExperimentConfig resolve(const std::string &config_path, const Overrides &o) {
  ConfigMap map;
  if (!config_path.empty()) map = load_config_file(config_path);
  o.apply(map);
  return resolve_config(map);
}

std::string system_name(const ExperimentConfig &cfg) {
  if (cfg.mode == RunMode::kFrame) return "Baseline";
  std::string name = cfg.embed.sub_segments() == 1 && cfg.embed.method == EmbedMethod::kAverage
                         ? "AVG"
                         : fmt::format("DS-{}", cfg.embed.sub_segments());
  return cfg.mode == RunMode::kUpperbound ? name + "(gold)" : name;
}

std::string report_header() {
  return fmt::format("{:<14} {:>12} {:>12} {:>7} {:>7}\n", "System", "NMI(%)", "F(%)", "R(%)",
                     "P(%)");
}

void write_text(const std::string &path, const std::string &text) {
  if (path.empty()) return;
  internal::write_file_atomically(path, text);
}

std::string rep_path(const std::string &prefix, int r) { return fmt::format("{}.rep{}.ali", prefix, r); }

// synth
int cmd_synth(const std::string &config_path, const Overrides &o, const std::string &features_out,
              const std::string &gold_out) {
  const ExperimentConfig cfg = resolve(config_path, o);
  const SynthCorpus corpus = generate_corpus(cfg.synth);
  write_feature_archive(corpus.features, features_out);
  serialize_alignment(corpus.gold, gold_out);
  std::cerr << "synthesized " << corpus.features.size() << " utterances, "
            << corpus.features.total_frames() << " frames\n";
  return 0;
}

// corrupt
int cmd_corrupt(const std::string &config_path, const Overrides &o, const std::string &gold,
                const std::string &out) {
  const ExperimentConfig cfg = resolve(config_path, o);
  const auto alignments = parse_alignment_file(gold);
  serialize_alignment(corrupt_corpus(alignments, cfg.corruption), out);
  return 0;
}

// segment
int cmd_segment(const std::string &labels, const std::string &out) {
  std::vector<Alignment> segs;
  for (const auto &a : parse_alignment_file(labels))
    segs.push_back(segmentation_to_alignment(boundaries_from_labels(a)));
  serialize_alignment(segs, out);
  return 0;
}

// embed
int cmd_embed(const std::string &config_path, const Overrides &o, const std::string &features_path,
              const std::string &segments_path, const std::string &out) {
  const ExperimentConfig cfg = resolve(config_path, o);
  FeatureArchive features = read_feature_archive(features_path);
  if (cfg.znorm) features = znormalize(features);
  const FrameCounts counts = frame_counts(features);
  std::vector<Segmentation> segs;
  for (const auto &a : parse_alignment_file(segments_path, &counts)) segs.push_back(segmentation_of(a));
  const SegmentEmbeddingSet emb = embed_corpus(features, segs, cfg.embed, cfg.workers);
  // One AUDF "utterance" per source utterance, one row per segment.
  FeatureArchive archive(features.frame_shift_ms());
  Eigen::Index row = 0;
  for (const auto &seg : segs) {
    const auto n = static_cast<Eigen::Index>(seg.n_segments());
    archive.add({seg.utt_id, emb.rows.middleRows(row, n).cast<float>()});
    row += n;
  }
  write_feature_archive(archive, out);
  return 0;
}

// cluster
int cmd_cluster(const std::string &config_path, const Overrides &o, const std::string &emb_path,
                const std::string &segments_path, const std::string &prefix) {
  const ExperimentConfig cfg = resolve(config_path, o);
  const FeatureArchive emb = read_feature_archive(emb_path);
  std::map<std::string, Segmentation, std::less<>> segs;
  if (!segments_path.empty()) {
    for (const auto &a : parse_alignment_file(segments_path)) segs.emplace(a.utt_id, segmentation_of(a));
    for (const auto &u : emb) {
      auto it = segs.find(u.utt_id);
      if (it == segs.end()) throw CoverageError("no segmentation for " + u.utt_id);
      if (static_cast<Eigen::Index>(it->second.n_segments()) != u.n_frames())
        throw DimensionError("embedding rows of " + u.utt_id + " do not match its segments");
    }
    if (segs.size() != emb.size()) throw CoverageError("segmentation covers extra utterances");
  }
  KMeansConfig kcfg = cfg.kmeans;
  kcfg.seed = cluster_seed(cfg.kmeans.seed, cfg.kmeans.k);
  const auto models = run_repetitions(stack_frames(emb), kcfg, cfg.reps, cfg.workers);
  std::string inertia;
  for (std::size_t r = 0; r < models.size(); ++r) {
    std::vector<Alignment> units;
    std::size_t row = 0;
    for (const auto &u : emb) {
      std::vector<std::string> labels;
      for (FrameIndex i = 0; i < u.n_frames(); ++i)
        labels.push_back("u" + std::to_string(models[r].assignments[row++]));
      if (segs.empty()) {
        units.push_back(alignment_from_frames(u.utt_id, labels));
      } else {
        Alignment a = label_segments(segs.at(u.utt_id), labels);
        units.push_back(cfg.merge_adjacent ? merge_adjacent_units(a) : std::move(a));
      }
    }
    serialize_alignment(units, rep_path(prefix, static_cast<int>(r)));
    inertia += fmt::format("{} {:.6f}\n", r, models[r].inertia);
  }
  write_text(prefix + ".inertia", inertia);
  return 0;
}

// eval
int cmd_eval(const std::string &config_path, const Overrides &o, const std::vector<std::string> &hyps,
             const std::string &gold_path, const std::string &inertia_path) {
  const ExperimentConfig cfg = resolve(config_path, o);
  const auto gold = parse_alignment_file(gold_path);
  FrameCounts counts;
  for (const auto &a : gold) counts.emplace(a.utt_id, a.n_frames());
  const double shift = cfg.frame_shift_ms.value_or(10.0);
  const std::int64_t tol = tolerance_frames(cfg.tolerance_ms, shift);

  std::vector<double> inertia;
  if (!inertia_path.empty()) {
    std::ifstream is(inertia_path);
    if (!is) throw IoError("cannot open " + inertia_path);
    int r;
    double v;
    while (is >> r >> v) inertia.push_back(v);
  }
  std::vector<MetricRow> rows;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto units = parse_alignment_file(hyps[i], &counts);
    MetricRow row = score_units(units, gold, tol, cfg.nmi_norm, cfg.boundary_matching,
                                cfg.boundary_average);
    if (i < inertia.size()) row.inertia = inertia[i];
    rows.push_back(row);
  }
  ReportConfig rc;
  rc.mode = "eval";
  rc.k = cfg.kmeans.k;
  rc.method = to_string(cfg.embed.method);
  rc.s = cfg.embed.sub_segments();
  rc.reps = static_cast<int>(rows.size());
  rc.tolerance_ms = cfg.tolerance_ms;
  rc.frame_shift_ms = shift;
  rc.tolerance_frames = tol;
  rc.nmi_norm = to_string(cfg.nmi_norm);
  rc.boundary_average = to_string(cfg.boundary_average);
  rc.boundary_matching = to_string(cfg.boundary_matching);
  rc.merge_adjacent = cfg.merge_adjacent;
  rc.resolved = describe_config(cfg);
  const EvalReport report = aggregate(rows, rc);
  if (!cfg.report_path.empty()) write_eval_report(report, cfg.report_path);
  std::cout << report_header() << format_report_row("eval", report) << '\n';
  return 0;
}

// run
int cmd_run(const std::string &config_path, const Overrides &o) {
  const ExperimentConfig cfg = resolve(config_path, o);
  const EvalReport report = run_experiment(cfg);
  if (!cfg.report_path.empty()) write_eval_report(report, cfg.report_path);
  const std::string table = report_header() + format_report_row(system_name(cfg), report) + '\n';
  write_text(cfg.table_path, table);
  std::cout << table;
  return 0;
}

// sweep
int cmd_sweep(const std::string &config_path, const Overrides &o) {
  const ExperimentConfig cfg = resolve(config_path, o);
  const SweepTable table = run_sweep(cfg, cfg.k_values);
  if (!cfg.report_path.empty())
    internal::write_file_atomically(cfg.report_path, sweep_table_to_json(table));
  const std::string text = format_sweep_table(table);
  write_text(cfg.table_path, text);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Acoustic unit discovery toolkit: segment, embed, cluster and score"};
  app.require_subcommand(1);

  std::string config_path;
  auto config_flag = [&](CLI::App *sub) {
    sub->add_option("--config", config_path, "Config file with [io] [synth] [corrupt] [embed] "
                                             "[cluster] [eval] [run] sections");
  };

  Overrides o;
  std::string features_out, gold_out, gold_in, out, labels_in, features_in, segments_in,
      emb_in, prefix, inertia_in;
  std::vector<std::string> hyps;

  auto *synth = app.add_subcommand("synth", "Generate a synthetic corpus and its gold alignment");
  config_flag(synth);
  add_synth_flags(synth, o);
  o.add_set(synth);
  synth->add_option("--features-out", features_out, "AUDF archive to write")->required();
  synth->add_option("--gold-out", gold_out, "Alignment file to write")->required();

  auto *corrupt = app.add_subcommand("corrupt", "Simulate a frame label stream from gold");
  config_flag(corrupt);
  add_corrupt_flags(corrupt, o);
  o.add_set(corrupt);
  corrupt->add_option("--gold", gold_in, "Gold alignment")->required();
  corrupt->add_option("--out", out, "Label stream to write")->required();

  auto *segment = app.add_subcommand("segment", "Derive segments from label discontinuities");
  segment->add_option("--labels", labels_in, "Frame label stream")->required();
  segment->add_option("--out", out, "Segmentation to write (labels are '_')")->required();

  auto *embed = app.add_subcommand("embed", "Embed segments as fixed-dimension vectors");
  config_flag(embed);
  add_embed_flags(embed, o);
  o.add_set(embed);
  embed->add_option("--features", features_in, "AUDF feature archive")->required();
  embed->add_option("--segments", segments_in, "Segmentation")->required();
  embed->add_option("--out", out, "AUDF archive of embeddings, one row per segment")->required();

  auto *cluster = app.add_subcommand("cluster", "Run repeated k-means and write unit transcriptions");
  config_flag(cluster);
  add_cluster_flags(cluster, o);
  o.add(cluster, "--merge-adjacent", "run.merge_adjacent", "Merge adjacent identical units");
  o.add_set(cluster);
  cluster->add_option("--embeddings", emb_in, "AUDF rows to cluster (embeddings or frames)")
      ->required();
  cluster->add_option("--segments", segments_in,
                      "Segmentation matching the embedding rows; without it rows are frames");
  cluster->add_option("--out-prefix", prefix, "Writes PREFIX.repN.ali and PREFIX.inertia")
      ->required();

  auto *eval = app.add_subcommand("eval", "Score unit transcriptions against gold");
  config_flag(eval);
  add_eval_flags(eval, o);
  o.add(eval, "--report", "io.report", "EvalReport JSON output");
  o.add_set(eval);
  eval->add_option("--hyp", hyps, "Unit transcription, one per repetition")->required();
  eval->add_option("--gold", gold_in, "Gold alignment")->required();
  eval->add_option("--inertia", inertia_in, "Inertia file written by cluster");

  auto *run = app.add_subcommand("run", "Run one experiment end to end");
  auto *sweep = app.add_subcommand("sweep", "Run one experiment per cluster count");
  for (auto *sub : {run, sweep}) {
    config_flag(sub);
    add_synth_flags(sub, o);
    add_corrupt_flags(sub, o);
    add_embed_flags(sub, o);
    add_cluster_flags(sub, o);
    add_eval_flags(sub, o);
    add_run_flags(sub, o);
    o.add_set(sub);
  }
  o.add(sweep, "--k-values", "run.k_values", "Comma-separated cluster counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*synth) return cmd_synth(config_path, o, features_out, gold_out);
    if (*corrupt) return cmd_corrupt(config_path, o, gold_in, out);
    if (*segment) return cmd_segment(labels_in, out);
    if (*embed) return cmd_embed(config_path, o, features_in, segments_in, out);
    if (*cluster) return cmd_cluster(config_path, o, emb_in, segments_in, prefix);
    if (*eval) return cmd_eval(config_path, o, hyps, gold_in, inertia_in);
    if (*run) return cmd_run(config_path, o);
    if (*sweep) return cmd_sweep(config_path, o);
  } catch (const aud::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.category()) {
      case ErrorCategory::kConfig: return kExitConfig;
      case ErrorCategory::kData: return kExitData;
      case ErrorCategory::kInvariant: return kExitInternal;
    }
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
