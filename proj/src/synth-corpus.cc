// aud/synth-corpus.cc

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

#include "aud/synth-corpus.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "aud/random.h"

namespace aud {

void SynthSpec::validate() const {
  if (n_phones < 2) throw ConfigError("n_phones must be at least 2");
  if (dim < 1) throw ConfigError("dim must be positive");
  if (n_utts < 1) throw ConfigError("n_utts must be positive");
  if (phones_per_utt.lo < 1 || phones_per_utt.lo > phones_per_utt.hi)
    throw ConfigError("phones_per_utt must be a non-empty range of positive counts");
  if (dur_frames.lo < 1 || dur_frames.lo > dur_frames.hi)
    throw ConfigError("dur_frames must be a non-empty range of positive counts");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw ConfigError("noise_sigma must be non-negative");
  if (!(centroid_scale > 0.0) || !std::isfinite(centroid_scale))
    throw ConfigError("centroid_scale must be positive");
}

void CorruptionSpec::validate() const {
  if (jitter_frames < 0) throw ConfigError("jitter_frames must be non-negative");
  if (!(substitution_rate >= 0.0 && substitution_rate <= 1.0))
    throw ConfigError("substitution_rate must lie in [0, 1]");
  if (min_dur_frames < 1) throw ConfigError("min_dur_frames must be positive");
}

std::string phone_label(int index) { return "p" + std::to_string(index); }

SynthCorpus generate_corpus(const SynthSpec &spec) {
  spec.validate();
  SynthCorpus corpus;
  Rng rng(spec.seed);
  corpus.centroids.resize(spec.n_phones, spec.dim);
  for (int p = 0; p < spec.n_phones; ++p)
    for (int j = 0; j < spec.dim; ++j)
      corpus.centroids(p, j) = rng.uniform_real(-spec.centroid_scale, spec.centroid_scale);

  for (int u = 0; u < spec.n_utts; ++u) {
    Rng urng(mix_seed(spec.seed, static_cast<std::uint64_t>(u)));
    Alignment ali;
    ali.utt_id = fmt::format("utt{:05d}", u);
    const std::int64_t n_seg = urng.uniform_int(spec.phones_per_utt.lo, spec.phones_per_utt.hi);
    std::vector<int> phones;
    FrameIndex t = 0;
    for (std::int64_t i = 0; i < n_seg; ++i) {
      const int phone = static_cast<int>(urng.uniform_below(spec.n_phones));
      const FrameIndex dur = urng.uniform_int(spec.dur_frames.lo, spec.dur_frames.hi);
      ali.entries.push_back({t, t + dur, phone_label(phone)});
      phones.push_back(phone);
      t += dur;
    }
    FrameMatrix utt;
    utt.utt_id = ali.utt_id;
    utt.values.resize(t, spec.dim);
    for (std::size_t i = 0; i < phones.size(); ++i) {
      const AlignmentEntry &e = ali.entries[i];
      for (FrameIndex f = e.start; f < e.end; ++f)
        for (int j = 0; j < spec.dim; ++j)
          utt.values(f, j) = static_cast<float>(corpus.centroids(phones[i], j) +
                                                spec.noise_sigma * urng.normal());
    }
    corpus.features.add(std::move(utt));
    corpus.gold.push_back(std::move(ali));
  }
  return corpus;
}

Alignment corrupt_alignment(const Alignment &gold, const CorruptionSpec &spec,
                            std::span<const std::string> inventory) {
  spec.validate();
  validate_alignment(gold);
  Rng rng(spec.seed);

  std::vector<std::string> own_labels;
  if (inventory.empty()) {
    std::set<std::string> labels;
    for (const auto &e : gold.entries) labels.insert(e.label);
    own_labels.assign(labels.begin(), labels.end());
    inventory = own_labels;
  }

  const std::size_t n = gold.entries.size();
  // pos[i] is the start of segment i; pos[0] = 0 and pos[n] = T stay fixed.
  std::vector<FrameIndex> pos(n + 1);
  for (std::size_t i = 0; i < n; ++i) pos[i] = gold.entries[i].start;
  pos[n] = gold.n_frames();
  const FrameIndex min_dur = spec.min_dur_frames;
  for (std::size_t i = 1; i < n; ++i) {
    const FrameIndex proposed = pos[i] + rng.uniform_int(-spec.jitter_frames, spec.jitter_frames);
    // Left neighbour already has its final position, right one is still gold.
    if (proposed - pos[i - 1] >= min_dur && pos[i + 1] - proposed >= min_dur) pos[i] = proposed;
  }

  Alignment out;
  out.utt_id = gold.utt_id;
  out.entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string label = gold.entries[i].label;
    if (rng.bernoulli(spec.substitution_rate)) {
      auto self = std::lower_bound(inventory.begin(), inventory.end(), label);
      const bool in_inventory = self != inventory.end() && *self == label;
      const std::size_t n_other = inventory.size() - (in_inventory ? 1 : 0);
      if (n_other > 0) {
        std::size_t pick = rng.uniform_below(n_other);
        if (in_inventory && pick >= static_cast<std::size_t>(self - inventory.begin())) ++pick;
        label = inventory[pick];
      }
    }
    out.entries.push_back({pos[i], pos[i + 1], std::move(label)});
  }
  validate_alignment(out);
  return out;
}

std::vector<Alignment> corrupt_corpus(std::span<const Alignment> gold,
                                      const CorruptionSpec &spec) {
  std::set<std::string> labels;
  for (const auto &a : gold)
    for (const auto &e : a.entries) labels.insert(e.label);
  const std::vector<std::string> inventory(labels.begin(), labels.end());
  std::vector<Alignment> out;
  out.reserve(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    CorruptionSpec s = spec;
    s.seed = mix_seed(spec.seed, i);
    out.push_back(corrupt_alignment(gold[i], s, inventory));
  }
  return out;
}

}  // namespace aud
