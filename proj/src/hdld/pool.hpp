// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "hdld/error.hpp"

namespace hdld {

// Run job(i) for every i in [0, count) across up to `threads` workers. Each
// job must write only to caller-owned slots for its own index, which keeps
// results independent of the scheduling order. The first exception thrown by
// a job is rethrown here after all workers stop.
inline void parallel_for(int count, int threads, const std::function<void(int)>& job) {
  require(count >= 0, Errc::invalid_argument, "parallel_for: negative count");
  require(threads >= 1, Errc::invalid_argument, "parallel_for: need at least one thread");
  if (count == 0) return;
  int workers = std::min(threads, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }

  std::atomic<int> next{0};
  std::atomic<bool> bail{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (!bail.load(std::memory_order_relaxed)) {
      int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
        bail.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace hdld
