#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace lcc {

/// Worker count: LCC_LAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
inline std::size_t worker_count() {
  if (const char *env = std::getenv("LCC_LAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<std::size_t>(v);
    } catch (const std::exception &) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls f(i) for i in [0, count) on up to worker_count() threads. Index i is
/// handled by thread i % workers, so any per-index output is independent of
/// scheduling. The first exception thrown by f is rethrown.
template <class F> void parallel_for(std::size_t count, F &&f, std::size_t workers = 0) {
  if (workers == 0)
    workers = worker_count();
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      f(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers)
          f(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error)
          error = std::current_exception();
      }
    });
  for (auto &t : pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
}

} // namespace lcc
