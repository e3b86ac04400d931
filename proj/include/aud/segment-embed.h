// aud/segment-embed.h

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

#ifndef AUD_SEGMENT_EMBED_H_
#define AUD_SEGMENT_EMBED_H_

#include <algorithm>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aud/feature-io.h"
#include "aud/segmenter.h"

namespace aud {

enum class EmbedMethod { kAverage, kDownsample };

std::string to_string(EmbedMethod method);
/// Accepts "avg" and "ds".  Throws ConfigError.
EmbedMethod parse_embed_method(std::string_view name);

struct EmbedConfig {
  EmbedMethod method = EmbedMethod::kAverage;
  int s = 1;

  /// Averaging is downsampling with a single sub-segment.
  int sub_segments() const { return method == EmbedMethod::kAverage ? 1 : s; }
  void validate() const;
};

/// Concatenated means of `s` consecutive sub-segments of an L x d segment.
///
/// Sub-segment i covers frames [floor(i*L/s), floor((i+1)*L/s)).  When L < s
/// each slot i instead takes the single frame min(floor(i*L/s), L-1), so short
/// segments are padded by frame replication and the output is always s*d.
/// Sums are accumulated in double, in frame order.
template <typename Derived>
Eigen::VectorXd embed_segment(const Eigen::MatrixBase<Derived> &frames, const EmbedConfig &cfg) {
  cfg.validate();
  const Eigen::Index len = frames.rows(), d = frames.cols();
  if (len == 0) throw EmptySegmentError("cannot embed a segment with no frames");
  const Eigen::Index s = cfg.sub_segments();
  Eigen::VectorXd out(s * d);
  Eigen::VectorXd acc(d);
  for (Eigen::Index i = 0; i < s; ++i) {
    Eigen::Index lo = i * len / s, hi = (i + 1) * len / s;
    if (len < s) {
      lo = std::min(lo, len - 1);
      hi = lo + 1;
    }
    acc.setZero();
    for (Eigen::Index t = lo; t < hi; ++t)
      for (Eigen::Index j = 0; j < d; ++j) acc(j) += static_cast<double>(frames(t, j));
    out.segment(i * d, d) = acc / static_cast<double>(hi - lo);
  }
  return out;
}

struct SegmentRef {
  std::string utt_id;
  FrameIndex start = 0;
  FrameIndex end = 0;
  bool operator==(const SegmentRef &) const = default;
};

/// One row per segment, ordered by utterance then by time.
struct SegmentEmbeddingSet {
  int dim = 0;
  RowMatrixXd rows;
  std::vector<SegmentRef> index;
};

/// Embeds every segment of `segs`, in the order given.  Throws DimensionError
/// when an utterance is missing from the archive or has a different length.
SegmentEmbeddingSet embed_corpus(const FeatureArchive &archive,
                                 std::span<const Segmentation> segs, const EmbedConfig &cfg,
                                 int workers = 1);

/// Per-dimension zero-mean, unit-variance normalization over the whole
/// archive.  Dimensions with zero variance are only centered.  Not applied by
/// the pipeline unless requested.
FeatureArchive znormalize(const FeatureArchive &archive);

/// All frames of the archive stacked in archive order, in double.
RowMatrixXd stack_frames(const FeatureArchive &archive);

}  // namespace aud

#endif  // AUD_SEGMENT_EMBED_H_
