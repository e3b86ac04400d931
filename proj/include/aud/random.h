// aud/random.h

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

#ifndef AUD_RANDOM_H_
#define AUD_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>

namespace aud {

/// SplitMix64 finalizer.  Used to derive independent sub-seeds:
///   mix_seed(seed, stream) = splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15)
/// This is the pinned seed-derivation function for per-utterance and
/// per-repetition streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seedable generator with platform-stable output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard.  The standard distributions are implementation-defined, so all
/// derived draws are done here: integers by rejection sampling, reals from the
/// top 53 bits, normals by the Marsaglia polar method.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n).  n must be positive.
  std::uint64_t uniform_below(std::uint64_t n) {
    // Reject the low remainder so that every residue is equally likely.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t x = engine_();
      if (x >= threshold) return x % n;
    }
  }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    return lo + static_cast<std::int64_t>(uniform_below(span));
  }

  /// Uniform real in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal draw.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace aud

#endif  // AUD_RANDOM_H_
