// aud/parallel.h

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

#ifndef AUD_PARALLEL_H_
#define AUD_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace aud {

/// Calls fn(i) for i in [0, n) using up to `workers` threads.  The range is
/// split into contiguous chunks, so fn must only write state owned by index i.
/// The exception of the lowest-numbered failing chunk is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn &&fn) {
  const std::size_t n_threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n_threads);
  {
    std::vector<std::jthread> threads;
    threads.reserve(n_threads);
    for (std::size_t w = 0; w < n_threads; ++w) {
      const std::size_t lo = n * w / n_threads, hi = n * (w + 1) / n_threads;
      threads.emplace_back([&fn, &errors, w, lo, hi] {
        try {
          for (std::size_t i = lo; i < hi; ++i) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace aud

#endif  // AUD_PARALLEL_H_
