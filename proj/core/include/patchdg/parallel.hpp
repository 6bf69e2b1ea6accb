// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "patchdg/error.hpp"

namespace patchdg {

/// Worker cap used by element loops. Defaults to 1 (sequential).
void set_num_threads(int threads);
int num_threads();

/// Runs body(i) for i in [0, n). Iterations are independent; results must be
/// written to per-index slots so that the outcome does not depend on scheduling.
/// The first exception thrown by any iteration is rethrown on the caller.
template <class Body>
void parallel_for(Index n, Body&& body) {
  const auto workers = std::min<Index>(num_threads(), n);
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (Index i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace patchdg
