#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pssc {

// Runs fn(i) for i in [0, count) on up to `workers` threads. Jobs are pulled
// from a shared counter, so fn must only write to state owned by index i.
// The first exception thrown by any job is rethrown on the caller.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const auto n_threads = static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(workers, 1, static_cast<std::ptrdiff_t>(count)));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(n_threads - 1);
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(body);
  body();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace pssc
