// aud/unit-eval.cc

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

#include "aud/unit-eval.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace aud {

namespace {

std::vector<std::string> sorted_labels(const UttFrameLabels &labels) {
  std::vector<std::string> out;
  for (const auto &[utt, frames] : labels) out.insert(out.end(), frames.begin(), frames.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::unordered_map<std::string_view, Eigen::Index> index_of(const std::vector<std::string> &v) {
  std::unordered_map<std::string_view, Eigen::Index> m;
  for (std::size_t i = 0; i < v.size(); ++i) m.emplace(v[i], static_cast<Eigen::Index>(i));
  return m;
}

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

ConfusionMatrix frame_confusion(const UttFrameLabels &du, const UttFrameLabels &gu) {
  for (const auto &[utt, frames] : du)
    if (!gu.count(utt)) throw KeyError("utterance " + utt + " has no gold labels");
  for (const auto &[utt, frames] : gu)
    if (!du.count(utt)) throw KeyError("utterance " + utt + " has no discovered units");

  ConfusionMatrix cm;
  cm.du_labels = sorted_labels(du);
  cm.gu_labels = sorted_labels(gu);
  const auto du_index = index_of(cm.du_labels), gu_index = index_of(cm.gu_labels);
  cm.counts = CountMatrix::Zero(static_cast<Eigen::Index>(cm.du_labels.size()),
                                static_cast<Eigen::Index>(cm.gu_labels.size()));
  for (const auto &[utt, d] : du) {
    const FrameLabels &g = gu.find(utt)->second;
    if (d.size() != g.size())
      throw DimensionError("utterance " + utt + " has " + std::to_string(d.size()) +
                           " discovered-unit frames but " + std::to_string(g.size()) +
                           " gold frames");
    for (std::size_t t = 0; t < d.size(); ++t)
      ++cm.counts(du_index.at(d[t]), gu_index.at(g[t]));
    cm.total += static_cast<std::int64_t>(d.size());
  }
  if (cm.total == 0) throw EmptyInputError("no frames to score");
  return cm;
}

ConfusionMatrix confusion_from_counts(const CountMatrix &counts) {
  ConfusionMatrix cm;
  for (Eigen::Index i = 0; i < counts.rows(); ++i) cm.du_labels.push_back(std::to_string(i));
  for (Eigen::Index j = 0; j < counts.cols(); ++j) cm.gu_labels.push_back(std::to_string(j));
  if (counts.size() > 0 && counts.minCoeff() < 0) throw DataError("negative count");
  cm.counts = counts;
  cm.total = counts.sum();
  if (cm.total <= 0) throw DataError("confusion matrix has no counts");
  return cm;
}

std::string to_string(NmiNorm norm) {
  switch (norm) {
    case NmiNorm::kArithmetic: return "arith";
    case NmiNorm::kReference: return "ref";
    case NmiNorm::kJoint: return "joint";
  }
  return "?";
}

NmiNorm parse_nmi_norm(std::string_view name) {
  if (name == "arith") return NmiNorm::kArithmetic;
  if (name == "ref") return NmiNorm::kReference;
  if (name == "joint") return NmiNorm::kJoint;
  throw ConfigError("unknown NMI normalization '" + std::string(name) +
                    "' (expected arith|ref|joint)");
}

namespace {

struct InformationTerms {
  double h_du = 0.0, h_gu = 0.0, h_joint = 0.0, mi = 0.0;
};

InformationTerms information_terms(const ConfusionMatrix &cm) {
  if (cm.total <= 0) throw DataError("confusion matrix has no counts");
  const double total = static_cast<double>(cm.total);
  const Eigen::VectorXd row = cm.counts.rowwise().sum().cast<double>() / total;
  const Eigen::VectorXd col = cm.counts.colwise().sum().cast<double>().transpose() / total;
  double h_du = 0.0, h_gu = 0.0, h_joint = 0.0, mi = 0.0;
  for (Eigen::Index i = 0; i < row.size(); ++i) h_du -= plogp(row(i));
  for (Eigen::Index j = 0; j < col.size(); ++j) h_gu -= plogp(col(j));
  for (Eigen::Index i = 0; i < cm.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < cm.counts.cols(); ++j) {
      if (cm.counts(i, j) == 0) continue;
      const double p = static_cast<double>(cm.counts(i, j)) / total;
      h_joint -= plogp(p);
      mi += p * std::log2(p / (row(i) * col(j)));
    }
  }
  return {h_du, h_gu, h_joint, mi};
}

}  // namespace

double mutual_information(const ConfusionMatrix &cm) {
  return std::max(0.0, information_terms(cm).mi);
}

double nmi(const ConfusionMatrix &cm, NmiNorm norm) {
  const auto [h_du, h_gu, h_joint, mi] = information_terms(cm);
  double num = mi, den = 0.0;
  switch (norm) {
    case NmiNorm::kArithmetic:
      num = 2.0 * mi;
      den = h_du + h_gu;
      break;
    case NmiNorm::kReference:
      den = h_gu;
      break;
    case NmiNorm::kJoint:
      den = h_joint;
      break;
  }
  if (den <= 0.0) return 100.0;
  return std::clamp(100.0 * num / den, 0.0, 100.0);
}

std::string to_string(BoundaryMatching m) {
  return m == BoundaryMatching::kGreedy ? "greedy" : "optimal";
}

BoundaryMatching parse_boundary_matching(std::string_view name) {
  if (name == "greedy") return BoundaryMatching::kGreedy;
  if (name == "optimal") return BoundaryMatching::kOptimal;
  throw ConfigError("unknown boundary matching '" + std::string(name) +
                    "' (expected greedy|optimal)");
}

std::string to_string(BoundaryAverage a) {
  return a == BoundaryAverage::kMicro ? "micro" : "macro";
}

BoundaryAverage parse_boundary_average(std::string_view name) {
  if (name == "micro") return BoundaryAverage::kMicro;
  if (name == "macro") return BoundaryAverage::kMacro;
  throw ConfigError("unknown boundary average '" + std::string(name) + "' (expected micro|macro)");
}

std::int64_t count_boundary_matches(std::span<const FrameIndex> hyp,
                                    std::span<const FrameIndex> ref, std::int64_t tol,
                                    BoundaryMatching matching) {
  std::int64_t matched = 0;
  if (matching == BoundaryMatching::kOptimal) {
    // For points with symmetric windows, matching each hypothesis to the
    // earliest free reference in reach is maximum.
    std::size_t j = 0;
    for (FrameIndex h : hyp) {
      while (j < ref.size() && ref[j] < h - tol) ++j;
      if (j < ref.size() && ref[j] <= h + tol) {
        ++matched;
        ++j;
      }
    }
    return matched;
  }
  std::vector<char> used(ref.size(), 0);
  for (FrameIndex h : hyp) {
    auto first = std::lower_bound(ref.begin(), ref.end(), h - tol);
    std::size_t best = ref.size();
    FrameIndex best_d = 0;
    for (auto it = first; it != ref.end() && *it <= h + tol; ++it) {
      const auto j = static_cast<std::size_t>(it - ref.begin());
      if (used[j]) continue;
      const FrameIndex d = std::abs(*it - h);
      if (best == ref.size() || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best < ref.size()) {
      used[best] = 1;
      ++matched;
    }
  }
  return matched;
}

BoundaryScore score_from_counts(std::int64_t n_matched, std::int64_t n_hyp, std::int64_t n_ref) {
  AUD_CHECK(n_matched >= 0 && n_matched <= std::min(n_hyp, n_ref));
  BoundaryScore s;
  s.n_matched = n_matched;
  s.n_hyp = n_hyp;
  s.n_ref = n_ref;
  s.precision_pct = n_hyp > 0 ? 100.0 * static_cast<double>(n_matched) / static_cast<double>(n_hyp)
                              : (n_ref == 0 ? 100.0 : 0.0);
  s.recall_pct = n_ref > 0 ? 100.0 * static_cast<double>(n_matched) / static_cast<double>(n_ref)
                           : (n_hyp == 0 ? 100.0 : 0.0);
  const double sum = s.precision_pct + s.recall_pct;
  s.fscore_pct = sum > 0.0 ? 2.0 * s.precision_pct * s.recall_pct / sum : 0.0;
  return s;
}

BoundaryScore boundary_prf(const Segmentation &hyp, const Segmentation &ref,
                           std::int64_t tol_frames, BoundaryMatching matching) {
  if (hyp.n_frames != ref.n_frames)
    throw DimensionError("segmentations of " + hyp.utt_id + " cover " +
                         std::to_string(hyp.n_frames) + " and " + std::to_string(ref.n_frames) +
                         " frames");
  validate_segmentation(hyp);
  validate_segmentation(ref);
  const auto matched = count_boundary_matches(hyp.boundaries, ref.boundaries, tol_frames, matching);
  return score_from_counts(matched, static_cast<std::int64_t>(hyp.boundaries.size()),
                           static_cast<std::int64_t>(ref.boundaries.size()));
}

BoundaryScore corpus_boundary_prf(std::span<const Segmentation> hyp,
                                  std::span<const Segmentation> ref, std::int64_t tol_frames,
                                  BoundaryMatching matching, BoundaryAverage average) {
  std::map<std::string_view, const Segmentation *> ref_by_id;
  for (const auto &r : ref) ref_by_id.emplace(r.utt_id, &r);
  if (ref_by_id.size() != hyp.size())
    throw KeyError("hypothesis and reference cover different utterance sets");
  std::int64_t matched = 0, n_hyp = 0, n_ref = 0;
  double p_sum = 0.0, r_sum = 0.0;
  for (const auto &h : hyp) {
    auto it = ref_by_id.find(h.utt_id);
    if (it == ref_by_id.end()) throw KeyError("utterance " + h.utt_id + " has no reference");
    const BoundaryScore s = boundary_prf(h, *it->second, tol_frames, matching);
    matched += s.n_matched;
    n_hyp += s.n_hyp;
    n_ref += s.n_ref;
    p_sum += s.precision_pct;
    r_sum += s.recall_pct;
  }
  BoundaryScore out = score_from_counts(matched, n_hyp, n_ref);
  if (average == BoundaryAverage::kMacro && !hyp.empty()) {
    out.precision_pct = p_sum / static_cast<double>(hyp.size());
    out.recall_pct = r_sum / static_cast<double>(hyp.size());
  }
  return out;
}

std::int64_t tolerance_frames(double tol_ms, double frame_shift_ms) {
  if (!(tol_ms >= 0.0)) throw ConfigError("tolerance must be non-negative");
  if (!(frame_shift_ms > 0.0)) throw ConfigError("frame shift must be positive");
  // The epsilon keeps exact ratios such as 0.3 / 0.1 from flooring down.
  return static_cast<std::int64_t>(std::floor(tol_ms / frame_shift_ms + 1e-9));
}

EvalReport aggregate(std::span<const MetricRow> rows, ReportConfig config) {
  if (rows.empty()) throw EmptyInputError("no repetitions to aggregate");
  EvalReport report;
  report.config = std::move(config);
  report.per_rep.assign(rows.begin(), rows.end());
  using Field = double MetricRow::*;
  constexpr Field kFields[] = {&MetricRow::nmi_pct,          &MetricRow::precision_pct,
                               &MetricRow::recall_pct,       &MetricRow::fscore_pct,
                               &MetricRow::n_hyp_boundaries, &MetricRow::n_ref_boundaries,
                               &MetricRow::inertia};
  const double n = static_cast<double>(rows.size());
  for (Field f : kFields) {
    double sum = 0.0;
    for (const auto &r : rows) sum += r.*f;
    const bool constant =
        std::all_of(rows.begin(), rows.end(), [&](const MetricRow &r) { return r.*f == rows[0].*f; });
    const double mean = constant ? rows[0].*f : sum / n;
    double ss = 0.0;
    for (const auto &r : rows) ss += (r.*f - mean) * (r.*f - mean);
    report.mean.*f = mean;
    report.std.*f = rows.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return report;
}

}  // namespace aud
