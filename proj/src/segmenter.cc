// aud/segmenter.cc

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

#include "aud/segmenter.h"

namespace aud {

void validate_segmentation(const Segmentation &seg) {
  if (seg.n_frames < 1) throw DimensionError("segmentation of " + seg.utt_id + " is empty");
  FrameIndex prev = 0;
  for (FrameIndex b : seg.boundaries) {
    if (b <= prev || b >= seg.n_frames)
      throw FormatError("segmentation of " + seg.utt_id + " has an invalid boundary at " +
                        std::to_string(b));
    prev = b;
  }
}

Segmentation boundaries_from_labels(const Alignment &labels) {
  validate_alignment(labels);
  Segmentation seg{labels.utt_id, {}, labels.n_frames()};
  for (std::size_t i = 1; i < labels.entries.size(); ++i)
    if (labels.entries[i].label != labels.entries[i - 1].label)
      seg.boundaries.push_back(labels.entries[i].start);
  return seg;
}

Segmentation segmentation_of(const Alignment &units) {
  validate_alignment(units);
  Segmentation seg{units.utt_id, {}, units.n_frames()};
  for (std::size_t i = 1; i < units.entries.size(); ++i)
    seg.boundaries.push_back(units.entries[i].start);
  return seg;
}

Alignment segmentation_to_alignment(const Segmentation &seg) {
  validate_segmentation(seg);
  Alignment ali{seg.utt_id, {}};
  for (std::size_t i = 0; i < seg.n_segments(); ++i)
    ali.entries.push_back({seg.segment_start(i), seg.segment_end(i), "_"});
  return ali;
}

Alignment merge_adjacent_units(const Alignment &units) {
  validate_alignment(units);
  Alignment out{units.utt_id, {}};
  for (const AlignmentEntry &e : units.entries) {
    if (!out.entries.empty() && out.entries.back().label == e.label)
      out.entries.back().end = e.end;
    else
      out.entries.push_back(e);
  }
  return out;
}

std::vector<std::string> broadcast_to_frames(const Alignment &units) {
  validate_alignment(units);
  std::vector<std::string> frames;
  frames.reserve(static_cast<std::size_t>(units.n_frames()));
  for (const AlignmentEntry &e : units.entries)
    frames.insert(frames.end(), static_cast<std::size_t>(e.length()), e.label);
  return frames;
}

Alignment label_segments(const Segmentation &seg, std::span<const std::string> labels) {
  validate_segmentation(seg);
  if (labels.size() != seg.n_segments())
    throw DimensionError("segmentation of " + seg.utt_id + " has " +
                         std::to_string(seg.n_segments()) + " segments but " +
                         std::to_string(labels.size()) + " labels were given");
  Alignment ali{seg.utt_id, {}};
  for (std::size_t i = 0; i < seg.n_segments(); ++i)
    ali.entries.push_back({seg.segment_start(i), seg.segment_end(i), labels[i]});
  return ali;
}

Alignment alignment_from_frames(const std::string &utt_id, std::span<const std::string> labels) {
  if (labels.empty()) throw DimensionError("no frames for " + utt_id);
  Alignment ali{utt_id, {}};
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const auto f = static_cast<FrameIndex>(t);
    if (!ali.entries.empty() && ali.entries.back().label == labels[t])
      ali.entries.back().end = f + 1;
    else
      ali.entries.push_back({f, f + 1, labels[t]});
  }
  return ali;
}

}  // namespace aud
