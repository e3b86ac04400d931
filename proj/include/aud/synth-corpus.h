// aud/synth-corpus.h

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

#ifndef AUD_SYNTH_CORPUS_H_
#define AUD_SYNTH_CORPUS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aud/feature-io.h"

namespace aud {

struct CountRange {
  std::int64_t lo = 1;
  std::int64_t hi = 1;
};

/// Gaussian-blob corpus: one random centroid per phone, frames are centroid
/// plus isotropic noise.
struct SynthSpec {
  int n_phones = 50;
  int dim = 40;
  int n_utts = 200;
  CountRange phones_per_utt{10, 30};
  CountRange dur_frames{3, 15};
  double noise_sigma = 0.5;
  double centroid_scale = 10.0;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

struct CorruptionSpec {
  std::int64_t jitter_frames = 0;
  double substitution_rate = 0.0;
  std::int64_t min_dur_frames = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthCorpus {
  FeatureArchive features;
  std::vector<Alignment> gold;
  RowMatrixXd centroids;  // n_phones x dim
};

/// Phone labels are "p<index>"; utterance ids are "utt<index>" zero-padded to
/// five digits.  Centroids come from a generator seeded with `seed`; each
/// utterance uses its own stream mix_seed(seed, utt_index).
SynthCorpus generate_corpus(const SynthSpec &spec);

std::string phone_label(int index);

/// Simulates an imperfect frame label stream.  Every internal boundary is
/// displaced by a uniform draw from [-jitter, +jitter]; a move that would leave
/// a segment shorter than min_dur_frames is discarded.  Each segment label is
/// then replaced, with probability substitution_rate, by a different label
/// drawn uniformly from `inventory` (sorted, distinct).  An empty inventory
/// means the label set of `gold` itself.
Alignment corrupt_alignment(const Alignment &gold, const CorruptionSpec &spec,
                            std::span<const std::string> inventory = {});

/// Corrupts every utterance; utterance i uses seed mix_seed(spec.seed, i) and
/// the label inventory of the whole corpus.
std::vector<Alignment> corrupt_corpus(std::span<const Alignment> gold,
                                      const CorruptionSpec &spec);

}  // namespace aud

#endif  // AUD_SYNTH_CORPUS_H_
