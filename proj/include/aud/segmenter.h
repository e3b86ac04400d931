// aud/segmenter.h

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

#ifndef AUD_SEGMENTER_H_
#define AUD_SEGMENTER_H_

#include <span>
#include <string>
#include <vector>

#include "aud/feature-io.h"

namespace aud {

/// Internal segment boundaries of one utterance.  Frames 0 and T are implied
/// and never stored.
struct Segmentation {
  std::string utt_id;
  std::vector<FrameIndex> boundaries;  // strictly increasing, each in (0, T)
  FrameIndex n_frames = 0;

  std::size_t n_segments() const { return boundaries.size() + 1; }
  FrameIndex segment_start(std::size_t i) const { return i == 0 ? 0 : boundaries[i - 1]; }
  FrameIndex segment_end(std::size_t i) const {
    return i == boundaries.size() ? n_frames : boundaries[i];
  }
  bool operator==(const Segmentation &) const = default;
};

/// Throws DimensionError or FormatError.
void validate_segmentation(const Segmentation &seg);

/// Boundaries at every label change; adjacent entries with equal labels are
/// fused first.
Segmentation boundaries_from_labels(const Alignment &labels);

/// Boundaries at every entry start, without fusing equal neighbours.
Segmentation segmentation_of(const Alignment &units);

/// Boundaries at every t where seq[t] != seq[t-1].
template <typename Label>
Segmentation boundaries_from_sequence(std::string utt_id, std::span<const Label> seq) {
  Segmentation seg{std::move(utt_id), {}, static_cast<FrameIndex>(seq.size())};
  for (std::size_t t = 1; t < seq.size(); ++t)
    if (!(seq[t] == seq[t - 1])) seg.boundaries.push_back(static_cast<FrameIndex>(t));
  return seg;
}

/// Persisted form: an alignment whose labels are all "_".
Alignment segmentation_to_alignment(const Segmentation &seg);

template <typename Scalar>
struct SegmentSlice {
  FrameIndex start;
  FrameIndex end;
  Eigen::Map<const RowMatrixX<Scalar>> frames;
};

/// Views into `features`, one per segment, in time order.  The views alias
/// `features` and must not outlive it.
template <typename Scalar>
std::vector<SegmentSlice<Scalar>> extract_segments(const RowMatrixX<Scalar> &features,
                                                   const Segmentation &seg) {
  if (seg.n_frames != features.rows())
    throw DimensionError("segmentation of " + seg.utt_id + " covers " +
                         std::to_string(seg.n_frames) + " frames, features have " +
                         std::to_string(features.rows()));
  validate_segmentation(seg);
  std::vector<SegmentSlice<Scalar>> out;
  out.reserve(seg.n_segments());
  for (std::size_t i = 0; i < seg.n_segments(); ++i) {
    const FrameIndex start = seg.segment_start(i), end = seg.segment_end(i);
    out.push_back({start, end,
                   Eigen::Map<const RowMatrixX<Scalar>>(features.data() + start * features.cols(),
                                                        end - start, features.cols())});
  }
  return out;
}

inline std::vector<SegmentSlice<float>> extract_segments(const FrameMatrix &features,
                                                         const Segmentation &seg) {
  return extract_segments(features.values, seg);
}

/// Collapses maximal runs of equal labels.  Idempotent.
Alignment merge_adjacent_units(const Alignment &units);

/// Frame t receives the label of the entry covering t.
std::vector<std::string> broadcast_to_frames(const Alignment &units);

/// Units from a segmentation and one label per segment.
Alignment label_segments(const Segmentation &seg, std::span<const std::string> labels);

/// Run-length encoding of per-frame labels.
Alignment alignment_from_frames(const std::string &utt_id, std::span<const std::string> labels);

}  // namespace aud

#endif  // AUD_SEGMENTER_H_
