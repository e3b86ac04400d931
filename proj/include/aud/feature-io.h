// aud/feature-io.h

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

#ifndef AUD_FEATURE_IO_H_
#define AUD_FEATURE_IO_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aud/aud-common.h"

namespace aud {

/// Frame-level features of one utterance: T rows of dimension d.
struct FrameMatrix {
  std::string utt_id;
  RowMatrixXf values;

  FrameIndex n_frames() const { return values.rows(); }
  int dim() const { return static_cast<int>(values.cols()); }
  bool operator==(const FrameMatrix &other) const;
};

/// Ordered collection of utterances sharing one feature dimension.
/// Iteration follows insertion order.
class FeatureArchive {
 public:
  explicit FeatureArchive(double frame_shift_ms = 10.0);

  double frame_shift_ms() const { return frame_shift_ms_; }
  void set_frame_shift_ms(double ms);

  /// Throws FormatError on a duplicate or empty utt_id, DimensionError when T
  /// or d is zero or d disagrees with earlier utterances, DataError on a
  /// non-finite value.
  void add(FrameMatrix utt);

  const FrameMatrix *find(std::string_view utt_id) const;
  /// Throws KeyError when absent.
  const FrameMatrix &at(std::string_view utt_id) const;

  std::size_t size() const { return utts_.size(); }
  bool empty() const { return utts_.empty(); }
  /// Shared feature dimension, 0 for an empty archive.
  int dim() const { return utts_.empty() ? 0 : utts_.front().dim(); }
  FrameIndex total_frames() const;

  std::vector<FrameMatrix>::const_iterator begin() const { return utts_.begin(); }
  std::vector<FrameMatrix>::const_iterator end() const { return utts_.end(); }
  const FrameMatrix &operator[](std::size_t i) const { return utts_[i]; }

  bool operator==(const FeatureArchive &other) const;

 private:
  double frame_shift_ms_;
  std::vector<FrameMatrix> utts_;
  std::unordered_map<std::string, std::size_t> index_;
};

// AUDF layout, all little-endian:
//   "AUDF" | u32 version=1 | f64 frame_shift_ms | u32 n_utts
//   per utterance: u32 id_len | id bytes | u32 T | u32 d | T*d f32, row-major
constexpr std::uint32_t kAudfVersion = 1;

FeatureArchive read_feature_archive(std::istream &is);
FeatureArchive read_feature_archive(const std::filesystem::path &path);
void write_feature_archive(const FeatureArchive &archive, std::ostream &os);
/// Writes through a temporary file that is renamed into place.
void write_feature_archive(const FeatureArchive &archive,
                           const std::filesystem::path &path);

struct AlignmentEntry {
  FrameIndex start = 0;
  FrameIndex end = 0;  // exclusive
  std::string label;

  FrameIndex length() const { return end - start; }
  bool operator==(const AlignmentEntry &) const = default;
};

/// Labeled contiguous intervals covering [0, T) of one utterance.  Used for
/// gold phone alignments, frame label streams and discovered units alike.
struct Alignment {
  std::string utt_id;
  std::vector<AlignmentEntry> entries;

  FrameIndex n_frames() const { return entries.empty() ? 0 : entries.back().end; }
  bool operator==(const Alignment &) const = default;
};

/// Checks the structural invariants: non-empty, starts at 0, start < end,
/// contiguous.  Throws FormatError or ContiguityError.
void validate_alignment(const Alignment &ali);

using FrameCounts = std::map<std::string, FrameIndex, std::less<>>;

FrameCounts frame_counts(const FeatureArchive &archive);

/// Parses the text alignment format, `utt_id start end label` per line.
/// When `expected` is non-null every utterance must be present in it with a
/// matching frame count, and vice versa (CoverageError).
std::vector<Alignment> parse_alignments(std::istream &is,
                                        const FrameCounts *expected = nullptr);
std::vector<Alignment> parse_alignment_file(const std::filesystem::path &path,
                                            const FrameCounts *expected = nullptr);

/// Rejects ids or labels that would not survive a round trip (FormatError).
void write_alignments(std::span<const Alignment> alignments, std::ostream &os);
void serialize_alignment(std::span<const Alignment> alignments,
                         const std::filesystem::path &path);

namespace internal {
/// Writes `bytes` to `path` via a sibling temporary file and rename.
void write_file_atomically(const std::filesystem::path &path, std::string_view bytes);
}  // namespace internal

}  // namespace aud

#endif  // AUD_FEATURE_IO_H_
