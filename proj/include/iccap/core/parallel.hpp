#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace iccap {

/// Worker count: IC_CAPACITY_THREADS if set to a positive integer, else the
/// hardware concurrency.
inline std::size_t worker_count() {
  if (const char* env = std::getenv("IC_CAPACITY_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Evaluates fn(0..n-1) on a pool of workers and returns the results in
/// index order. The first exception thrown by any item is rethrown.
template <class F>
auto parallel_map(std::size_t n, F&& fn, std::size_t workers = worker_count()) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<T> out(n);
  workers = std::min(std::max<std::size_t>(workers, 1), std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace iccap
