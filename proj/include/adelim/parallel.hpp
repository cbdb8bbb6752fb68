#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace adelim {

/// Runs fn(i) for i in [0, n) across up to n_threads workers with a static
/// block partition. Workers write only to caller-owned, index-addressed
/// slots, so results are independent of the worker count and of scheduling.
template <class Fn>
void parallel_for(std::int64_t n, int n_threads, Fn&& fn) {
  if (n <= 0) return;
  const int workers = std::clamp<std::int64_t>(n_threads, 1, n);
  if (workers == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = n * w / workers;
    const std::int64_t end = n * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace adelim
