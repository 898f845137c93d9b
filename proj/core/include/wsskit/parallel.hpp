#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace wsskit {

/// Worker count for per-vertex loops. Reads WSSKIT_THREADS once; an explicit
/// set_thread_count() call overrides it (0 restores the default).
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n) over contiguous static chunks. Output written
/// per index is independent of the worker count. If several chunks throw, the
/// exception from the lowest chunk is rethrown.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = std::min(thread_count(), n / 256 + 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace wsskit
