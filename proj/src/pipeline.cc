// aud/pipeline.cc

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

#include "aud/pipeline.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <set>

#include <fmt/format.h>

#include "aud/random.h"

namespace aud {

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kSegment: return "segment";
    case RunMode::kFrame: return "frame";
    case RunMode::kUpperbound: return "upperbound";
  }
  return "?";
}

RunMode parse_run_mode(std::string_view name) {
  if (name == "segment") return RunMode::kSegment;
  if (name == "frame") return RunMode::kFrame;
  if (name == "upperbound") return RunMode::kUpperbound;
  throw ConfigError("unknown mode '" + std::string(name) + "' (expected segment|frame|upperbound)");
}

void ExperimentConfig::validate() const {
  if (features_path.empty()) {
    synth.validate();
  } else if (gold_path.empty()) {
    throw ConfigError("a gold alignment is required to score features read from " +
                      features_path);
  }
  if (mode == RunMode::kSegment && labels_path.empty()) corruption.validate();
  embed.validate();
  kmeans.validate();
  if (reps < 1) throw ConfigError("reps must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  tolerance_frames(tolerance_ms, frame_shift_ms.value_or(10.0));
}

// Config files.

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigMap parse_config_text(std::string_view text) {
  ConfigMap out;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    auto fail = [&](const std::string &msg) {
      return ConfigError("config line " + std::to_string(line_no) + ": " + msg);
    };
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw fail("unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw fail("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw fail("expected key = value");
    if (section.empty()) throw fail("key outside of a section");
    const std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw fail("empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    out[section + "." + std::string(key)] = std::string(value);
  }
  return out;
}

ConfigMap load_config_file(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

namespace {

template <typename T>
T parse_number(const std::string &key, const std::string &value) {
  T out{};
  const char *end = value.data() + value.size();
  auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConfigError("invalid value '" + value + "' for " + key);
  return out;
}

bool parse_bool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("invalid boolean '" + value + "' for " + key);
}

std::vector<int> parse_int_list(const std::string &key, const std::string &value) {
  std::vector<int> out;
  std::string_view rest(value);
  if (!rest.empty() && rest.front() == '[' && rest.back() == ']')
    rest = rest.substr(1, rest.size() - 2);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    out.push_back(parse_number<int>(key, std::string(trim(rest.substr(0, comma)))));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

std::string join(const std::vector<int> &v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

const std::vector<std::string> &known_config_keys() {
  static const std::vector<std::string> keys = {
      "io.features", "io.gold", "io.labels", "io.report", "io.table",
      "synth.n_phones", "synth.dim", "synth.n_utts", "synth.phones_per_utt_min",
      "synth.phones_per_utt_max", "synth.dur_frames_min", "synth.dur_frames_max",
      "synth.noise_sigma", "synth.centroid_scale", "synth.seed",
      "corrupt.jitter_frames", "corrupt.substitution_rate", "corrupt.min_dur_frames",
      "corrupt.seed",
      "embed.method", "embed.s", "embed.znorm",
      "cluster.k", "cluster.init", "cluster.max_iter", "cluster.tol", "cluster.seed",
      "cluster.reps", "cluster.workers",
      "eval.tolerance_ms", "eval.frame_shift_ms", "eval.nmi_norm", "eval.boundary_average",
      "eval.matching",
      "run.mode", "run.merge_adjacent", "run.k_values"};
  return keys;
}

ExperimentConfig resolve_config(const ConfigMap &values) {
  const auto &known = known_config_keys();
  for (const auto &[key, value] : values)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown config key " + key);

  ExperimentConfig cfg;
  auto get = [&](const char *key) -> const std::string * {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  auto set_string = [&](const char *key, std::string &dst) {
    if (auto v = get(key)) dst = *v;
  };
  auto set = [&](const char *key, auto &dst) {
    if (auto v = get(key)) dst = parse_number<std::remove_reference_t<decltype(dst)>>(key, *v);
  };

  set_string("io.features", cfg.features_path);
  set_string("io.gold", cfg.gold_path);
  set_string("io.labels", cfg.labels_path);
  set_string("io.report", cfg.report_path);
  set_string("io.table", cfg.table_path);

  set("synth.n_phones", cfg.synth.n_phones);
  set("synth.dim", cfg.synth.dim);
  set("synth.n_utts", cfg.synth.n_utts);
  set("synth.phones_per_utt_min", cfg.synth.phones_per_utt.lo);
  set("synth.phones_per_utt_max", cfg.synth.phones_per_utt.hi);
  set("synth.dur_frames_min", cfg.synth.dur_frames.lo);
  set("synth.dur_frames_max", cfg.synth.dur_frames.hi);
  set("synth.noise_sigma", cfg.synth.noise_sigma);
  set("synth.centroid_scale", cfg.synth.centroid_scale);
  set("synth.seed", cfg.synth.seed);

  set("corrupt.jitter_frames", cfg.corruption.jitter_frames);
  set("corrupt.substitution_rate", cfg.corruption.substitution_rate);
  set("corrupt.min_dur_frames", cfg.corruption.min_dur_frames);
  set("corrupt.seed", cfg.corruption.seed);

  if (auto v = get("embed.method")) cfg.embed.method = parse_embed_method(*v);
  set("embed.s", cfg.embed.s);
  if (auto v = get("embed.znorm")) cfg.znorm = parse_bool("embed.znorm", *v);

  set("cluster.k", cfg.kmeans.k);
  if (auto v = get("cluster.init")) cfg.kmeans.init = parse_kmeans_init(*v);
  set("cluster.max_iter", cfg.kmeans.max_iter);
  set("cluster.tol", cfg.kmeans.tol);
  set("cluster.seed", cfg.kmeans.seed);
  set("cluster.reps", cfg.reps);
  set("cluster.workers", cfg.workers);

  set("eval.tolerance_ms", cfg.tolerance_ms);
  if (auto v = get("eval.frame_shift_ms"))
    cfg.frame_shift_ms = parse_number<double>("eval.frame_shift_ms", *v);
  if (auto v = get("eval.nmi_norm")) cfg.nmi_norm = parse_nmi_norm(*v);
  if (auto v = get("eval.boundary_average")) cfg.boundary_average = parse_boundary_average(*v);
  if (auto v = get("eval.matching")) cfg.boundary_matching = parse_boundary_matching(*v);

  if (auto v = get("run.mode")) cfg.mode = parse_run_mode(*v);
  if (auto v = get("run.merge_adjacent"))
    cfg.merge_adjacent = parse_bool("run.merge_adjacent", *v);
  if (auto v = get("run.k_values")) cfg.k_values = parse_int_list("run.k_values", *v);

  cfg.validate();
  return cfg;
}

std::vector<std::pair<std::string, std::string>> describe_config(const ExperimentConfig &cfg) {
  auto num = [](auto v) { return fmt::format("{}", v); };
  return {
      {"io.features", cfg.features_path},
      {"io.gold", cfg.gold_path},
      {"io.labels", cfg.labels_path},
      {"synth.n_phones", num(cfg.synth.n_phones)},
      {"synth.dim", num(cfg.synth.dim)},
      {"synth.n_utts", num(cfg.synth.n_utts)},
      {"synth.phones_per_utt_min", num(cfg.synth.phones_per_utt.lo)},
      {"synth.phones_per_utt_max", num(cfg.synth.phones_per_utt.hi)},
      {"synth.dur_frames_min", num(cfg.synth.dur_frames.lo)},
      {"synth.dur_frames_max", num(cfg.synth.dur_frames.hi)},
      {"synth.noise_sigma", num(cfg.synth.noise_sigma)},
      {"synth.centroid_scale", num(cfg.synth.centroid_scale)},
      {"synth.seed", num(cfg.synth.seed)},
      {"corrupt.jitter_frames", num(cfg.corruption.jitter_frames)},
      {"corrupt.substitution_rate", num(cfg.corruption.substitution_rate)},
      {"corrupt.min_dur_frames", num(cfg.corruption.min_dur_frames)},
      {"corrupt.seed", num(cfg.corruption.seed)},
      {"embed.method", to_string(cfg.embed.method)},
      {"embed.s", num(cfg.embed.sub_segments())},
      {"embed.znorm", cfg.znorm ? "true" : "false"},
      {"cluster.k", num(cfg.kmeans.k)},
      {"cluster.init", to_string(cfg.kmeans.init)},
      {"cluster.max_iter", num(cfg.kmeans.max_iter)},
      {"cluster.tol", num(cfg.kmeans.tol)},
      {"cluster.seed", num(cfg.kmeans.seed)},
      {"cluster.reps", num(cfg.reps)},
      {"eval.tolerance_ms", num(cfg.tolerance_ms)},
      {"eval.frame_shift_ms", cfg.frame_shift_ms ? num(*cfg.frame_shift_ms) : "archive"},
      {"eval.nmi_norm", to_string(cfg.nmi_norm)},
      {"eval.boundary_average", to_string(cfg.boundary_average)},
      {"eval.matching", to_string(cfg.boundary_matching)},
      {"run.mode", to_string(cfg.mode)},
      {"run.merge_adjacent", cfg.merge_adjacent ? "true" : "false"},
      {"run.k_values", join(cfg.k_values)},
  };
}

// Experiment.

namespace {

template <typename Fn>
auto in_stage(const char *stage, Fn &&fn) {
  try {
    return fn();
  } catch (Error &e) {
    e.add_context(stage);
    throw;
  }
}

std::vector<Alignment> in_archive_order(const FeatureArchive &features,
                                        std::vector<Alignment> alignments) {
  std::map<std::string, Alignment, std::less<>> by_id;
  for (auto &a : alignments) by_id.emplace(a.utt_id, std::move(a));
  std::vector<Alignment> out;
  out.reserve(features.size());
  for (const auto &u : features) out.push_back(std::move(by_id.at(u.utt_id)));
  return out;
}

std::string unit_label(int cluster) { return "u" + std::to_string(cluster); }

}  // namespace

ExperimentData load_experiment_data(const ExperimentConfig &cfg) {
  cfg.validate();
  ExperimentData data;
  if (cfg.features_path.empty()) {
    SynthCorpus corpus = in_stage("synth", [&] { return generate_corpus(cfg.synth); });
    data.features = std::move(corpus.features);
    data.gold = std::move(corpus.gold);
  } else {
    data.features = in_stage("features", [&] { return read_feature_archive(cfg.features_path); });
  }
  const FrameCounts counts = frame_counts(data.features);
  if (!cfg.gold_path.empty())
    data.gold = in_stage("gold", [&] {
      return in_archive_order(data.features, parse_alignment_file(cfg.gold_path, &counts));
    });
  if (cfg.mode == RunMode::kSegment) {
    if (!cfg.labels_path.empty())
      data.labels = in_stage("labels", [&] {
        return in_archive_order(data.features, parse_alignment_file(cfg.labels_path, &counts));
      });
    else
      data.labels = in_stage("corrupt", [&] { return corrupt_corpus(data.gold, cfg.corruption); });
  }
  return data;
}

std::uint64_t cluster_seed(std::uint64_t seed, int k) {
  return mix_seed(seed, static_cast<std::uint64_t>(k));
}

std::vector<UnitTranscription> discover_units(const ExperimentConfig &cfg,
                                              const ExperimentData &data) {
  const FeatureArchive features = cfg.znorm ? znormalize(data.features) : data.features;
  KMeansConfig kcfg = cfg.kmeans;
  kcfg.seed = cluster_seed(cfg.kmeans.seed, cfg.kmeans.k);
  std::vector<UnitTranscription> out;

  if (cfg.mode == RunMode::kFrame) {
    const RowMatrixXd frames = stack_frames(features);
    const auto models = in_stage("cluster", [&] {
      return run_repetitions(frames, kcfg, cfg.reps, cfg.workers);
    });
    for (const KMeansModel &m : models) {
      UnitTranscription tr{{}, m.inertia};
      std::size_t row = 0;
      for (const auto &u : features) {
        std::vector<std::string> labels;
        labels.reserve(static_cast<std::size_t>(u.n_frames()));
        for (FrameIndex t = 0; t < u.n_frames(); ++t) labels.push_back(unit_label(m.assignments[row++]));
        tr.units.push_back(alignment_from_frames(u.utt_id, labels));
      }
      out.push_back(std::move(tr));
    }
    return out;
  }

  const std::vector<Alignment> &source = cfg.mode == RunMode::kUpperbound ? data.gold : data.labels;
  if (source.size() != features.size())
    throw CoverageError(to_string(cfg.mode) + " mode needs one label sequence per utterance");
  std::vector<Segmentation> segs;
  segs.reserve(source.size());
  in_stage("segment", [&] {
    for (const auto &a : source) segs.push_back(boundaries_from_labels(a));
    return 0;
  });
  const SegmentEmbeddingSet emb = in_stage("embed", [&] {
    return embed_corpus(features, segs, cfg.embed, cfg.workers);
  });
  const auto models = in_stage("cluster", [&] {
    return run_repetitions(emb.rows, kcfg, cfg.reps, cfg.workers);
  });
  for (const KMeansModel &m : models) {
    UnitTranscription tr{{}, m.inertia};
    std::size_t row = 0;
    for (const auto &seg : segs) {
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < seg.n_segments(); ++i) labels.push_back(unit_label(m.assignments[row++]));
      Alignment units = label_segments(seg, labels);
      tr.units.push_back(cfg.merge_adjacent ? merge_adjacent_units(units) : std::move(units));
    }
    out.push_back(std::move(tr));
  }
  return out;
}

MetricRow score_units(std::span<const Alignment> units, std::span<const Alignment> gold,
                      std::int64_t tol_frames, NmiNorm norm, BoundaryMatching matching,
                      BoundaryAverage average) {
  UttFrameLabels du, gu;
  std::vector<Segmentation> hyp, ref;
  for (const auto &a : units) {
    du.emplace(a.utt_id, broadcast_to_frames(a));
    hyp.push_back(segmentation_of(a));
  }
  for (const auto &a : gold) {
    gu.emplace(a.utt_id, broadcast_to_frames(a));
    ref.push_back(boundaries_from_labels(a));
  }
  MetricRow row;
  row.nmi_pct = nmi(frame_confusion(du, gu), norm);
  const BoundaryScore b = corpus_boundary_prf(hyp, ref, tol_frames, matching, average);
  row.precision_pct = b.precision_pct;
  row.recall_pct = b.recall_pct;
  row.fscore_pct = b.fscore_pct;
  row.n_hyp_boundaries = static_cast<double>(b.n_hyp);
  row.n_ref_boundaries = static_cast<double>(b.n_ref);
  return row;
}

EvalReport run_experiment(const ExperimentConfig &cfg, const ExperimentData &data) {
  cfg.validate();
  if (data.gold.size() != data.features.size())
    throw CoverageError("gold alignment does not cover every utterance");
  const double shift = cfg.frame_shift_ms.value_or(data.features.frame_shift_ms());
  const std::int64_t tol = tolerance_frames(cfg.tolerance_ms, shift);

  const auto transcriptions = discover_units(cfg, data);
  std::vector<MetricRow> rows;
  for (const auto &tr : transcriptions) {
    MetricRow row = in_stage("eval", [&] {
      return score_units(tr.units, data.gold, tol, cfg.nmi_norm, cfg.boundary_matching,
                         cfg.boundary_average);
    });
    row.inertia = tr.inertia;
    rows.push_back(row);
  }

  ReportConfig rc;
  rc.mode = to_string(cfg.mode);
  rc.k = cfg.kmeans.k;
  rc.method = to_string(cfg.embed.method);
  rc.s = cfg.embed.sub_segments();
  rc.reps = cfg.reps;
  rc.tolerance_ms = cfg.tolerance_ms;
  rc.frame_shift_ms = shift;
  rc.tolerance_frames = tol;
  rc.nmi_norm = to_string(cfg.nmi_norm);
  rc.boundary_average = to_string(cfg.boundary_average);
  rc.boundary_matching = to_string(cfg.boundary_matching);
  rc.merge_adjacent = cfg.merge_adjacent;
  const std::uint64_t kseed = cluster_seed(cfg.kmeans.seed, cfg.kmeans.k);
  for (int r = 0; r < cfg.reps; ++r) rc.seeds.push_back(repetition_seed(kseed, r));
  rc.resolved = describe_config(cfg);
  return aggregate(rows, std::move(rc));
}

EvalReport run_experiment(const ExperimentConfig &cfg) {
  return run_experiment(cfg, load_experiment_data(cfg));
}

SweepTable run_sweep(const ExperimentConfig &cfg, std::span<const int> k_values,
                     const ExperimentData &data) {
  std::set<int> seen;
  for (int k : k_values)
    if (!seen.insert(k).second) throw DuplicateKeyError("k=" + std::to_string(k) + " listed twice");
  if (k_values.empty()) throw ConfigError("empty list of cluster counts");
  SweepTable table;
  for (int k : k_values) {
    ExperimentConfig c = cfg;
    c.kmeans.k = k;
    table.emplace_back(k, run_experiment(c, data));
  }
  return table;
}

SweepTable run_sweep(const ExperimentConfig &cfg, std::span<const int> k_values) {
  return run_sweep(cfg, k_values, load_experiment_data(cfg));
}

}  // namespace aud
