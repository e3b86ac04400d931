// aud/kmeans.cc

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

#include "aud/kmeans.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "aud/parallel.h"
#include "aud/random.h"

namespace aud {

std::string to_string(KMeansInit init) {
  return init == KMeansInit::kKMeansPlusPlus ? "kmeanspp" : "random";
}

KMeansInit parse_kmeans_init(std::string_view name) {
  if (name == "kmeanspp") return KMeansInit::kKMeansPlusPlus;
  if (name == "random") return KMeansInit::kRandom;
  throw ConfigError("unknown k-means init '" + std::string(name) + "' (expected kmeanspp|random)");
}

void KMeansConfig::validate() const {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(tol >= 0.0)) throw ConfigError("tol must be non-negative");
}

namespace {

bool same_bits(const RowMatrixXd &a, const RowMatrixXd &b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.size() == 0 ||
          std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0);
}

void check_data(const RowMatrixXd &data, int k) {
  if (data.rows() < k)
    throw InsufficientSamplesError("k-means with k=" + std::to_string(k) + " needs at least " +
                                   std::to_string(k) + " samples, got " +
                                   std::to_string(data.rows()));
  if (!data.allFinite()) throw DataError("k-means input contains non-finite values");
}

RowMatrixXd init_kmeanspp(const RowMatrixXd &data, int k, Rng &rng) {
  const Eigen::Index n = data.rows();
  RowMatrixXd centroids(k, data.cols());
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  std::vector<double> d2(static_cast<std::size_t>(n));

  auto take = [&](Eigen::Index i, int c) {
    chosen[static_cast<std::size_t>(i)] = 1;
    centroids.row(c) = data.row(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = squared_distance(data.row(j), centroids.row(c));
      auto &slot = d2[static_cast<std::size_t>(j)];
      slot = c == 0 ? d : std::min(slot, d);
    }
  };

  take(static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::uint64_t>(n))), 0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : d2) total += d;
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double r = rng.uniform01() * total;
      double cum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = d2[static_cast<std::size_t>(i)];
        if (d <= 0.0) continue;
        cum += d;
        pick = i;
        if (cum > r) break;
      }
    } else {
      // Every sample coincides with a centroid: pick uniformly among the rest.
      std::uint64_t r = rng.uniform_below(static_cast<std::uint64_t>(n - c));
      for (Eigen::Index i = 0; i < n; ++i) {
        if (chosen[static_cast<std::size_t>(i)]) continue;
        if (r-- == 0) {
          pick = i;
          break;
        }
      }
    }
    take(pick, c);
  }
  return centroids;
}

RowMatrixXd init_random(const RowMatrixXd &data, int k, Rng &rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(data.rows()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  RowMatrixXd centroids(k, data.cols());
  for (int c = 0; c < k; ++c) {
    const auto j = c + static_cast<std::size_t>(rng.uniform_below(idx.size() - c));
    std::swap(idx[static_cast<std::size_t>(c)], idx[j]);
    centroids.row(c) = data.row(idx[static_cast<std::size_t>(c)]);
  }
  return centroids;
}

RowMatrixXd initial_centroids(const RowMatrixXd &data, const KMeansConfig &cfg, Rng &rng) {
  return cfg.init == KMeansInit::kKMeansPlusPlus ? init_kmeanspp(data, cfg.k, rng)
                                                 : init_random(data, cfg.k, rng);
}

// Returns the inertia, summed in sample order.
double assign_all(const RowMatrixXd &data, const RowMatrixXd &centroids, std::vector<int> &assign,
                  std::vector<double> &dist, int workers) {
  const auto n = static_cast<std::size_t>(data.rows());
  assign.resize(n);
  dist.resize(n);
  constexpr std::size_t kBlock = 256;
  parallel_for((n + kBlock - 1) / kBlock, workers, [&](std::size_t b) {
    for (std::size_t i = b * kBlock; i < std::min(n, (b + 1) * kBlock); ++i)
      assign[i] = nearest_centroid(centroids, data.row(static_cast<Eigen::Index>(i)), &dist[i]);
  });
  double inertia = 0.0;
  for (double d : dist) inertia += d;
  return inertia;
}

void cluster_mean(const RowMatrixXd &data, const std::vector<int> &assign, int c,
                  RowMatrixXd &centroids) {
  centroids.row(c).setZero();
  double count = 0.0;
  for (std::size_t i = 0; i < assign.size(); ++i) {
    if (assign[i] != c) continue;
    centroids.row(c) += data.row(static_cast<Eigen::Index>(i));
    count += 1.0;
  }
  centroids.row(c) /= count;
}

}  // namespace

bool KMeansModel::operator==(const KMeansModel &other) const {
  return k == other.k && same_bits(centroids, other.centroids) &&
         assignments == other.assignments &&
         std::memcmp(&inertia, &other.inertia, sizeof(double)) == 0 && n_iter == other.n_iter &&
         inertia_history == other.inertia_history;
}

RowMatrixXd kmeans_initial_centroids(const RowMatrixXd &data, const KMeansConfig &cfg) {
  cfg.validate();
  check_data(data, cfg.k);
  Rng rng(cfg.seed);
  return initial_centroids(data, cfg, rng);
}

KMeansModel kmeans_fit(const RowMatrixXd &data, const KMeansConfig &cfg, int workers) {
  cfg.validate();
  check_data(data, cfg.k);
  const int k = cfg.k;
  const auto n = static_cast<std::size_t>(data.rows());
  Rng rng(cfg.seed);

  KMeansModel model;
  model.k = k;
  model.centroids = initial_centroids(data, cfg, rng);
  std::vector<int> assign;
  std::vector<double> dist;
  model.inertia = assign_all(data, model.centroids, assign, dist, workers);
  model.inertia_history.push_back(model.inertia);

  RowMatrixXd next(k, data.cols());
  std::vector<std::size_t> counts(static_cast<std::size_t>(k));
  std::vector<int> new_assign;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    next.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      next.row(assign[i]) += data.row(static_cast<Eigen::Index>(i));
      ++counts[static_cast<std::size_t>(assign[i])];
    }
    for (int c = 0; c < k; ++c)
      if (counts[static_cast<std::size_t>(c)] > 0)
        next.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);

    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const int a = assign[i];
        if (counts[static_cast<std::size_t>(a)] < 2) continue;
        const double d = squared_distance(data.row(static_cast<Eigen::Index>(i)), next.row(a));
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      AUD_CHECK(far < n);  // N >= k guarantees a cluster with two members
      const int old = assign[far];
      assign[far] = c;
      --counts[static_cast<std::size_t>(old)];
      counts[static_cast<std::size_t>(c)] = 1;
      next.row(c) = data.row(static_cast<Eigen::Index>(far));
      cluster_mean(data, assign, old, next);
    }

    double max_shift = 0.0;
    if (cfg.tol > 0.0)
      for (int c = 0; c < k; ++c)
        max_shift = std::max(max_shift, std::sqrt(squared_distance(next.row(c),
                                                                   model.centroids.row(c))));
    model.centroids = next;
    model.inertia = assign_all(data, model.centroids, new_assign, dist, workers);
    model.inertia_history.push_back(model.inertia);
    model.n_iter = iter;
    const bool fixed_point = new_assign == assign;
    assign.swap(new_assign);
    if (fixed_point || (cfg.tol > 0.0 && max_shift <= cfg.tol)) break;
  }
  model.assignments = std::move(assign);
  return model;
}

std::vector<int> kmeans_assign(const KMeansModel &model, const RowMatrixXd &data, int workers) {
  if (data.cols() != model.centroids.cols())
    throw DimensionError("data has dimension " + std::to_string(data.cols()) +
                         ", model expects " + std::to_string(model.centroids.cols()));
  std::vector<int> assign;
  std::vector<double> dist;
  assign_all(data, model.centroids, assign, dist, workers);
  return assign;
}

std::uint64_t repetition_seed(std::uint64_t seed, int r) {
  return mix_seed(seed, static_cast<std::uint64_t>(r));
}

std::vector<KMeansModel> run_repetitions(const RowMatrixXd &data, const KMeansConfig &cfg,
                                         int reps, int workers) {
  if (reps < 1) throw ConfigError("repetition count must be at least 1");
  std::vector<KMeansModel> models(static_cast<std::size_t>(reps));
  const int outer = std::max(1, std::min(workers, reps));
  const int inner = std::max(1, workers / outer);
  parallel_for(models.size(), outer, [&](std::size_t r) {
    KMeansConfig rc = cfg;
    rc.seed = repetition_seed(cfg.seed, static_cast<int>(r));
    models[r] = kmeans_fit(data, rc, inner);
  });
  return models;
}

}  // namespace aud
