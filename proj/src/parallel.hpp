// Copyright 2026 The spinlube Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Index-ordered parallel map. Work items are claimed dynamically, but every
// result lands in its own slot, so the output never depends on the number of
// workers or on scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "common.hpp"

namespace spinlube {

/// Worker count: `requested` if positive, else the SPINLUBE_THREADS
/// environment variable, else 1.
template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        // keep the lowest failing index so the reported error is reproducible
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

template <class T, class F>
std::vector<T> parallel_map(std::size_t count, int threads, F&& body) {
  std::vector<T> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = body(i); });
  return out;
}

}  // namespace spinlube
