// aud/segment-embed.cc

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

#include "aud/segment-embed.h"

#include <cmath>

#include "aud/parallel.h"

namespace aud {

std::string to_string(EmbedMethod method) {
  return method == EmbedMethod::kAverage ? "avg" : "ds";
}

EmbedMethod parse_embed_method(std::string_view name) {
  if (name == "avg") return EmbedMethod::kAverage;
  if (name == "ds") return EmbedMethod::kDownsample;
  throw ConfigError("unknown embedding method '" + std::string(name) + "' (expected avg|ds)");
}

void EmbedConfig::validate() const {
  if (s < 1) throw ConfigError("sub-segment count s must be at least 1");
}

SegmentEmbeddingSet embed_corpus(const FeatureArchive &archive,
                                 std::span<const Segmentation> segs, const EmbedConfig &cfg,
                                 int workers) {
  cfg.validate();
  SegmentEmbeddingSet set;
  set.dim = cfg.sub_segments() * archive.dim();

  std::vector<const FrameMatrix *> feats(segs.size());
  std::vector<Eigen::Index> offset(segs.size() + 1, 0);
  for (std::size_t u = 0; u < segs.size(); ++u) {
    feats[u] = archive.find(segs[u].utt_id);
    if (feats[u] == nullptr)
      throw DimensionError("utterance " + segs[u].utt_id + " is not in the feature archive");
    if (feats[u]->n_frames() != segs[u].n_frames)
      throw DimensionError("utterance " + segs[u].utt_id + " has " +
                           std::to_string(feats[u]->n_frames()) +
                           " frames but its segmentation covers " +
                           std::to_string(segs[u].n_frames));
    validate_segmentation(segs[u]);
    offset[u + 1] = offset[u] + static_cast<Eigen::Index>(segs[u].n_segments());
  }

  set.rows.resize(offset.back(), set.dim);
  set.index.resize(static_cast<std::size_t>(offset.back()));
  parallel_for(segs.size(), workers, [&](std::size_t u) {
    const auto pieces = extract_segments(*feats[u], segs[u]);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const Eigen::Index row = offset[u] + static_cast<Eigen::Index>(i);
      set.rows.row(row) = embed_segment(pieces[i].frames, cfg).transpose();
      set.index[static_cast<std::size_t>(row)] = {segs[u].utt_id, pieces[i].start, pieces[i].end};
    }
  });
  return set;
}

FeatureArchive znormalize(const FeatureArchive &archive) {
  FeatureArchive out(archive.frame_shift_ms());
  if (archive.empty()) return out;
  const int d = archive.dim();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d), sq = Eigen::VectorXd::Zero(d);
  double n = 0;
  for (const auto &u : archive) {
    for (Eigen::Index t = 0; t < u.values.rows(); ++t) {
      const Eigen::VectorXd x = u.values.row(t).cast<double>().transpose();
      sum += x;
      sq += x.cwiseAbs2();
    }
    n += static_cast<double>(u.n_frames());
  }
  const Eigen::VectorXd mean = sum / n;
  Eigen::VectorXd scale(d);
  for (int j = 0; j < d; ++j) {
    const double var = std::max(0.0, sq(j) / n - mean(j) * mean(j));
    scale(j) = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
  }
  for (const auto &u : archive) {
    FrameMatrix m{u.utt_id, RowMatrixXf(u.values.rows(), d)};
    for (Eigen::Index t = 0; t < u.values.rows(); ++t)
      m.values.row(t) = ((u.values.row(t).cast<double>().transpose() - mean).cwiseProduct(scale))
                            .transpose()
                            .cast<float>();
    out.add(std::move(m));
  }
  return out;
}

RowMatrixXd stack_frames(const FeatureArchive &archive) {
  RowMatrixXd out(archive.total_frames(), archive.dim());
  Eigen::Index row = 0;
  for (const auto &u : archive) {
    out.middleRows(row, u.n_frames()) = u.values.cast<double>();
    row += u.n_frames();
  }
  return out;
}

}  // namespace aud
