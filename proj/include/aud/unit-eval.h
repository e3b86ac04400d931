// aud/unit-eval.h

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

#ifndef AUD_UNIT_EVAL_H_
#define AUD_UNIT_EVAL_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aud/eval-report.h"
#include "aud/segmenter.h"

namespace aud {

using FrameLabels = std::vector<std::string>;
using UttFrameLabels = std::map<std::string, FrameLabels, std::less<>>;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Joint frame counts of discovered units (rows) and gold phones (columns).
/// Labels are sorted lexicographically.
struct ConfusionMatrix {
  std::vector<std::string> du_labels;
  std::vector<std::string> gu_labels;
  CountMatrix counts;
  std::int64_t total = 0;
};

/// Throws KeyError when the utterance sets differ, DimensionError when an
/// utterance has different lengths on the two sides, EmptyInputError when
/// there are no frames at all.
ConfusionMatrix frame_confusion(const UttFrameLabels &du, const UttFrameLabels &gu);

/// Wraps a raw count matrix; rows and columns are labeled by index.  Throws
/// DataError on negative counts or a zero total.
ConfusionMatrix confusion_from_counts(const CountMatrix &counts);

enum class NmiNorm {
  kArithmetic,  // 2 I / (H(DU) + H(GU))
  kReference,   // I / H(GU)
  kJoint,       // I / H(DU, GU)
};

std::string to_string(NmiNorm norm);
/// Accepts "arith", "ref" and "joint".
NmiNorm parse_nmi_norm(std::string_view name);

/// Mutual information between the row and column labelings, in bits.
double mutual_information(const ConfusionMatrix &cm);

/// Normalized mutual information in percent, with base-2 logarithms.  A zero
/// denominator means every entropy involved is zero, which scores 100.
double nmi(const ConfusionMatrix &cm, NmiNorm norm = NmiNorm::kArithmetic);

struct BoundaryScore {
  double precision_pct = 0.0;
  double recall_pct = 0.0;
  double fscore_pct = 0.0;
  std::int64_t n_hyp = 0;
  std::int64_t n_ref = 0;
  std::int64_t n_matched = 0;
};

enum class BoundaryMatching {
  kGreedy,   // hypotheses in order, each takes the nearest free reference
  kOptimal,  // maximum one-to-one matching
};

enum class BoundaryAverage { kMicro, kMacro };

std::string to_string(BoundaryMatching m);
BoundaryMatching parse_boundary_matching(std::string_view name);
std::string to_string(BoundaryAverage a);
BoundaryAverage parse_boundary_average(std::string_view name);

/// Number of one-to-one matches between sorted boundary lists where a match
/// requires |h - r| <= tol.  In greedy mode ties between two references go to
/// the earlier one.
std::int64_t count_boundary_matches(std::span<const FrameIndex> hyp,
                                    std::span<const FrameIndex> ref, std::int64_t tol,
                                    BoundaryMatching matching = BoundaryMatching::kGreedy);

/// Precision, recall and F from counts.  With no hypotheses precision is 100
/// if there are also no references and 0 otherwise; recall symmetrically.
BoundaryScore score_from_counts(std::int64_t n_matched, std::int64_t n_hyp, std::int64_t n_ref);

/// Internal boundaries only.  Throws DimensionError on a frame-count mismatch.
BoundaryScore boundary_prf(const Segmentation &hyp, const Segmentation &ref,
                           std::int64_t tol_frames,
                           BoundaryMatching matching = BoundaryMatching::kGreedy);

/// Corpus score, utterances paired by id.  F is always computed from pooled
/// counts; precision and recall are pooled (micro) or per-utterance means
/// (macro).  Throws KeyError on mismatched utterance sets.
BoundaryScore corpus_boundary_prf(std::span<const Segmentation> hyp,
                                  std::span<const Segmentation> ref, std::int64_t tol_frames,
                                  BoundaryMatching matching = BoundaryMatching::kGreedy,
                                  BoundaryAverage average = BoundaryAverage::kMicro);

/// floor(tol_ms / frame_shift_ms); 20 ms at a 10 ms hop is 2 frames.
std::int64_t tolerance_frames(double tol_ms, double frame_shift_ms);

/// Mean and sample standard deviation (n - 1; 0 for one row) of every metric.
/// Throws EmptyInputError.
EvalReport aggregate(std::span<const MetricRow> rows, ReportConfig config = {});

}  // namespace aud

#endif  // AUD_UNIT_EVAL_H_
