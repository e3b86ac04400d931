// aud/eval-report.h

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

#ifndef AUD_EVAL_REPORT_H_
#define AUD_EVAL_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace aud {

/// Scores of one k-means repetition.
struct MetricRow {
  double nmi_pct = 0.0;
  double precision_pct = 0.0;
  double recall_pct = 0.0;
  double fscore_pct = 0.0;
  double n_hyp_boundaries = 0.0;
  double n_ref_boundaries = 0.0;
  double inertia = 0.0;

  bool operator==(const MetricRow &) const = default;
};

/// Settings echoed into every report.  `resolved` holds the fully resolved
/// experiment configuration as ordered key/value pairs.
struct ReportConfig {
  std::string mode = "segment";
  int k = 50;
  std::string method = "avg";
  int s = 1;
  int reps = 5;
  double tolerance_ms = 20.0;
  double frame_shift_ms = 10.0;
  std::int64_t tolerance_frames = 2;
  std::string nmi_norm = "arith";
  std::string boundary_average = "micro";
  std::string boundary_matching = "greedy";
  bool merge_adjacent = true;
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, std::string>> resolved;

  bool operator==(const ReportConfig &) const = default;
};

struct EvalReport {
  ReportConfig config;
  std::vector<MetricRow> per_rep;
  MetricRow mean;
  MetricRow std;

  bool operator==(const EvalReport &) const = default;
};

/// JSON text; floating-point values are printed with six decimals.
std::string eval_report_to_json(const EvalReport &report);
EvalReport eval_report_from_json(const std::string &text);
void write_eval_report(const EvalReport &report, const std::filesystem::path &path);
EvalReport read_eval_report(const std::filesystem::path &path);

/// One "NMI / F / Recall / Precision" line in mean±std form.
std::string format_report_row(const std::string &system, const EvalReport &report);

/// Cluster-count sweep: one report per k, in sweep order.
using SweepTable = std::vector<std::pair<int, EvalReport>>;

std::string sweep_table_to_json(const SweepTable &table);
/// Three-row text table: k values, NMI, F-score.
std::string format_sweep_table(const SweepTable &table);

}  // namespace aud

#endif  // AUD_EVAL_REPORT_H_
