// aud/kmeans.h

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

#ifndef AUD_KMEANS_H_
#define AUD_KMEANS_H_

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "aud/aud-common.h"

namespace aud {

enum class KMeansInit { kKMeansPlusPlus, kRandom };

std::string to_string(KMeansInit init);
/// Accepts "kmeanspp" and "random".  Throws ConfigError.
KMeansInit parse_kmeans_init(std::string_view name);

struct KMeansConfig {
  int k = 50;
  KMeansInit init = KMeansInit::kKMeansPlusPlus;
  int max_iter = 300;
  /// 0 stops only at an assignment fixed point; a positive value also stops
  /// once no centroid moves by more than tol (Euclidean).
  double tol = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct KMeansModel {
  int k = 0;
  RowMatrixXd centroids;          // k x D
  std::vector<int> assignments;   // one per training sample
  double inertia = 0.0;           // sum of squared distances to assigned centroids
  int n_iter = 0;
  /// Inertia after the initial assignment and after every Lloyd iteration.
  std::vector<double> inertia_history;

  bool operator==(const KMeansModel &other) const;
};

/// Squared Euclidean distance, summed in coordinate order.
template <typename DerivedA, typename DerivedB>
double squared_distance(const Eigen::MatrixBase<DerivedA> &a, const Eigen::MatrixBase<DerivedB> &b) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double diff = static_cast<double>(a(j)) - static_cast<double>(b(j));
    acc += diff * diff;
  }
  return acc;
}

/// Index of the nearest centroid; ties go to the lowest index.
template <typename Derived>
int nearest_centroid(const RowMatrixXd &centroids, const Eigen::MatrixBase<Derived> &x,
                     double *dist = nullptr) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(centroids.row(c), x);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (dist != nullptr) *dist = best_d;
  return best;
}

/// Initial centroids as chosen by kmeans_fit for the same configuration.
/// k-means++: first centroid uniform over samples, each further one drawn with
/// probability proportional to the squared distance to the nearest centroid
/// chosen so far.  random: k distinct samples, uniformly.
RowMatrixXd kmeans_initial_centroids(const RowMatrixXd &data, const KMeansConfig &cfg);

/// Lloyd's algorithm.  Assignment is parallelized over samples with `workers`
/// threads; centroid sums always run in sample order, so the result does not
/// depend on the worker count.  An empty cluster is re-seeded with the sample
/// farthest from its current centroid (taken from a cluster with more than
/// one member).
///
/// Throws InsufficientSamplesError when N < k and DataError on non-finite
/// input.
KMeansModel kmeans_fit(const RowMatrixXd &data, const KMeansConfig &cfg, int workers = 1);

/// Nearest-centroid labels for new data.  Throws DimensionError.
std::vector<int> kmeans_assign(const KMeansModel &model, const RowMatrixXd &data,
                               int workers = 1);

/// Seed of repetition r: mix_seed(seed, r).
std::uint64_t repetition_seed(std::uint64_t seed, int r);

/// `reps` independent fits with seeds repetition_seed(cfg.seed, r), returned
/// in repetition order.  Repetitions run concurrently when workers > 1.
std::vector<KMeansModel> run_repetitions(const RowMatrixXd &data, const KMeansConfig &cfg,
                                         int reps = 5, int workers = 1);

}  // namespace aud

#endif  // AUD_KMEANS_H_
