// aud/pipeline.h

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

#ifndef AUD_PIPELINE_H_
#define AUD_PIPELINE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aud/eval-report.h"
#include "aud/kmeans.h"
#include "aud/segment-embed.h"
#include "aud/synth-corpus.h"
#include "aud/unit-eval.h"

namespace aud {

enum class RunMode {
  kSegment,     // boundaries from the frame label stream
  kFrame,       // k-means on raw frames
  kUpperbound,  // boundaries from the gold alignment
};

std::string to_string(RunMode mode);
RunMode parse_run_mode(std::string_view name);

struct ExperimentConfig {
  RunMode mode = RunMode::kSegment;

  // Inputs.  Without a feature archive the corpus is synthesized; without a
  // label stream the gold alignment is corrupted with `corruption`.
  std::string features_path;
  std::string gold_path;
  std::string labels_path;
  SynthSpec synth;
  CorruptionSpec corruption;

  EmbedConfig embed;
  bool znorm = false;

  KMeansConfig kmeans;
  int reps = 5;
  int workers = 1;

  double tolerance_ms = 20.0;
  std::optional<double> frame_shift_ms;  // archive value when unset
  NmiNorm nmi_norm = NmiNorm::kArithmetic;
  BoundaryAverage boundary_average = BoundaryAverage::kMicro;
  BoundaryMatching boundary_matching = BoundaryMatching::kGreedy;

  bool merge_adjacent = true;
  std::vector<int> k_values{30, 40, 50, 60, 70};

  std::string report_path;
  std::string table_path;

  /// Throws ConfigError.
  void validate() const;
};

/// "section.key" -> value, as read from a config file or flags.
using ConfigMap = std::map<std::string, std::string>;

/// Parses `[section]` headers and `key = value` lines; '#' starts a comment
/// line; values may be double-quoted.  Throws ConfigError with a line number.
ConfigMap parse_config_text(std::string_view text);
ConfigMap load_config_file(const std::filesystem::path &path);

/// Applies `values` on top of the defaults.  Unknown keys and unparsable
/// values throw ConfigError.
ExperimentConfig resolve_config(const ConfigMap &values);

/// Every key of the resolved configuration, except the worker count, which
/// must not influence results.
std::vector<std::pair<std::string, std::string>> describe_config(const ExperimentConfig &cfg);

/// All keys accepted by resolve_config.
const std::vector<std::string> &known_config_keys();

struct ExperimentData {
  FeatureArchive features;
  std::vector<Alignment> gold;    // archive order
  std::vector<Alignment> labels;  // archive order; empty in frame mode
};

/// Loads or synthesizes the corpus and label stream described by `cfg`.
/// Errors carry the stage that raised them.
ExperimentData load_experiment_data(const ExperimentConfig &cfg);

/// Seed of the k-means runs for cluster count k: mix_seed(seed, k).
std::uint64_t cluster_seed(std::uint64_t seed, int k);

/// Full protocol: segment, embed, cluster `reps` times, optionally merge
/// adjacent identical units, score every repetition and aggregate.
EvalReport run_experiment(const ExperimentConfig &cfg, const ExperimentData &data);
EvalReport run_experiment(const ExperimentConfig &cfg);

/// One experiment per k.  Throws DuplicateKeyError on repeated k.
SweepTable run_sweep(const ExperimentConfig &cfg, std::span<const int> k_values,
                     const ExperimentData &data);
SweepTable run_sweep(const ExperimentConfig &cfg, std::span<const int> k_values);

/// Discovered units of one repetition, per utterance in archive order.
struct UnitTranscription {
  std::vector<Alignment> units;
  double inertia = 0.0;
};

/// Runs stages up to clustering and returns the unit transcriptions of every
/// repetition.  Used by run_experiment and by the CLI.
std::vector<UnitTranscription> discover_units(const ExperimentConfig &cfg,
                                              const ExperimentData &data);

/// Scores one transcription against the gold alignment.
MetricRow score_units(std::span<const Alignment> units, std::span<const Alignment> gold,
                      std::int64_t tol_frames, NmiNorm norm, BoundaryMatching matching,
                      BoundaryAverage average);

}  // namespace aud

#endif  // AUD_PIPELINE_H_
