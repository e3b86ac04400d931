// tests/kmeans-test.cc

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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "aud/kmeans.h"
#include "aud/random.h"

namespace aud {
namespace {

KMeansConfig config(int k, std::uint64_t seed, KMeansInit init = KMeansInit::kKMeansPlusPlus) {
  KMeansConfig cfg;
  cfg.k = k;
  cfg.seed = seed;
  cfg.init = init;
  return cfg;
}

// Exhaustive two-way partition oracle: minimum within-cluster sum of squares.
double brute_force_k2(const RowMatrixXd &x) {
  const auto n = x.rows();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    double sse = 0;
    for (int side = 0; side < 2; ++side) {
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
      int count = 0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (((mask >> i) & 1) == static_cast<std::uint64_t>(side)) mean += x.row(i), ++count;
      mean /= count;
      for (Eigen::Index i = 0; i < n; ++i)
        if (((mask >> i) & 1) == static_cast<std::uint64_t>(side))
          sse += (x.row(i) - mean).squaredNorm();
    }
    best = std::min(best, sse);
  }
  return best;
}

double inertia_of(const RowMatrixXd &x, const RowMatrixXd &c, const std::vector<int> &a) {
  double s = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) s += (x.row(i) - c.row(a[i])).squaredNorm();
  return s;
}

RowMatrixXd random_points(std::mt19937_64 &gen, int n, int d) {
  std::normal_distribution<double> val(0, 3);
  RowMatrixXd x(n, d);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = val(gen);
  return x;
}

TEST_CASE("two obvious clusters on a line") {
  RowMatrixXd x(4, 1);
  x << 0, 1, 10, 11;
  const KMeansModel m = kmeans_fit(x, config(2, 3));
  std::vector<double> c{m.centroids(0, 0), m.centroids(1, 0)};
  std::sort(c.begin(), c.end());
  CHECK(c[0] == 0.5);
  CHECK(c[1] == 10.5);
  CHECK(m.inertia == 1.0);
  CHECK(brute_force_k2(x) == 1.0);
  CHECK(m.assignments[0] == m.assignments[1]);
  CHECK(m.assignments[2] == m.assignments[3]);
  CHECK(m.assignments[0] != m.assignments[2]);
}

TEST_CASE("k = 1 gives the mean; k = N gives zero inertia") {
  std::mt19937_64 gen(2);
  const RowMatrixXd x = random_points(gen, 20, 3);
  const KMeansModel one = kmeans_fit(x, config(1, 0));
  const Eigen::RowVectorXd mean = x.colwise().mean();
  CHECK((one.centroids.row(0) - mean).cwiseAbs().maxCoeff() < 1e-12);
  const double total = (x.rowwise() - mean).rowwise().squaredNorm().sum();
  CHECK(std::abs(one.inertia - total) < 1e-9 * total);

  const KMeansModel all = kmeans_fit(x, config(20, 0));
  CHECK(all.inertia == 0.0);
  std::vector<int> a = all.assignments;
  std::sort(a.begin(), a.end());
  CHECK(std::unique(a.begin(), a.end()) == a.end());
}

TEST_CASE("best of restarts reaches the exhaustive optimum for small k = 2 instances") {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 7);
    const int d = 1 + static_cast<int>(gen() % 2);
    const RowMatrixXd x = random_points(gen, n, d);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < 20; ++r) best = std::min(best, kmeans_fit(x, config(2, mix_seed(trial, r))).inertia);
    const double opt = brute_force_k2(x);
    CHECK(best >= opt - 1e-9);
    CHECK(std::abs(best - opt) <= 1e-9);
  }
}

TEST_CASE("inertia history is non-increasing and matches the final model") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 10 + static_cast<int>(gen() % 60);
    const int d = 1 + static_cast<int>(gen() % 4);
    const int k = 1 + static_cast<int>(gen() % 8);
    const RowMatrixXd x = random_points(gen, n, d);
    const KMeansInit init = trial % 2 ? KMeansInit::kRandom : KMeansInit::kKMeansPlusPlus;
    const KMeansModel m = kmeans_fit(x, config(k, trial, init));
    REQUIRE(!m.inertia_history.empty());
    for (std::size_t i = 1; i < m.inertia_history.size(); ++i)
      CHECK(m.inertia_history[i] <= m.inertia_history[i - 1]);
    CHECK(m.inertia == m.inertia_history.back());
    CHECK(std::abs(m.inertia - inertia_of(x, m.centroids, m.assignments)) <= 1e-9 * (1 + m.inertia));
    // Fixed point: every sample sits with its nearest centroid.
    CHECK(kmeans_assign(m, x) == m.assignments);
  }
}

TEST_CASE("assignment picks the nearest centroid, lowest index on ties") {
  RowMatrixXd c(3, 1);
  c << 0, 2, 2;
  Eigen::VectorXd x(1);
  x << 1;
  CHECK(nearest_centroid(c, x) == 0);
  x << 2;
  CHECK(nearest_centroid(c, x) == 1);

  std::mt19937_64 gen(9);
  const RowMatrixXd data = random_points(gen, 200, 3);
  const KMeansModel m = kmeans_fit(data, config(6, 1));
  const RowMatrixXd probe = random_points(gen, 300, 3);
  const std::vector<int> got = kmeans_assign(m, probe, 3);
  for (Eigen::Index i = 0; i < probe.rows(); ++i) {
    int best = 0;
    for (int j = 1; j < m.k; ++j)
      if ((probe.row(i) - m.centroids.row(j)).squaredNorm() <
          (probe.row(i) - m.centroids.row(best)).squaredNorm())
        best = j;
    CHECK(got[i] == best);
  }
  CHECK_THROWS_AS(kmeans_assign(m, RowMatrixXd::Zero(2, 4)), DimensionError);
}

TEST_CASE("repetitions and worker counts") {
  std::mt19937_64 gen(15);
  const RowMatrixXd x = random_points(gen, 700, 4);
  const KMeansConfig cfg = config(7, 42);
  const auto reps1 = run_repetitions(x, cfg, 1);
  KMeansConfig c0 = cfg;
  c0.seed = repetition_seed(cfg.seed, 0);
  CHECK(reps1[0] == kmeans_fit(x, c0));

  const auto serial = run_repetitions(x, cfg, 5, 1);
  const auto parallel = run_repetitions(x, cfg, 5, 4);
  REQUIRE(serial.size() == 5);
  CHECK(serial == parallel);
  CHECK(kmeans_fit(x, cfg, 1) == kmeans_fit(x, cfg, 8));
  CHECK(serial[0].assignments != serial[1].assignments);
}

TEST_CASE("well separated blobs give equal inertia across repetitions") {
  Rng rng(3);
  RowMatrixXd x(300, 2);
  for (int i = 0; i < 300; ++i) {
    const double cx = (i % 3) * 100.0;
    x(i, 0) = cx + rng.normal();
    x(i, 1) = rng.normal();
  }
  const auto reps = run_repetitions(x, config(3, 0), 5);
  for (const auto &m : reps) CHECK(std::abs(m.inertia - reps[0].inertia) < 1e-9 * reps[0].inertia);

  // k-means++ seeds one centroid per blob almost always.
  int hits = 0;
  for (int s = 0; s < 1000; ++s) {
    const RowMatrixXd c = kmeans_initial_centroids(x, config(3, s));
    std::vector<int> blob;
    for (int j = 0; j < 3; ++j) blob.push_back(static_cast<int>(std::lround(c(j, 0) / 100.0)));
    std::sort(blob.begin(), blob.end());
    hits += blob == std::vector<int>{0, 1, 2};
  }
  CHECK(hits >= 950);
}

TEST_CASE("empty clusters are re-seeded") {
  // Duplicate points force empty clusters under random init.
  RowMatrixXd x(8, 1);
  x << 0, 0, 0, 0, 0, 0, 5, 9;
  for (int s = 0; s < 50; ++s) {
    const KMeansModel m = kmeans_fit(x, config(3, s, KMeansInit::kRandom));
    std::vector<int> counts(3, 0);
    for (int a : m.assignments) ++counts[a];
    for (int c : counts) CHECK(c > 0);
    CHECK(m.inertia == 0.0);
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(kmeans_fit(RowMatrixXd::Zero(3, 2), config(4, 0)), InsufficientSamplesError);
  RowMatrixXd bad = RowMatrixXd::Zero(5, 2);
  bad(2, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(kmeans_fit(bad, config(2, 0)), DataError);
  CHECK_THROWS_AS(kmeans_fit(RowMatrixXd::Zero(5, 2), config(0, 0)), ConfigError);
  CHECK(parse_kmeans_init("random") == KMeansInit::kRandom);
  CHECK(to_string(KMeansInit::kKMeansPlusPlus) == "kmeanspp");
  CHECK_THROWS_AS(parse_kmeans_init("bogus"), ConfigError);
}

}  // namespace
}  // namespace aud
