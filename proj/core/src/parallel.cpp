#include "wsskit/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>

namespace wsskit {
namespace {

std::atomic<std::size_t> g_override{0};

std::size_t default_thread_count() {
  static const std::size_t value = [] {
    if (const char* env = std::getenv("WSSKIT_THREADS")) {
      std::size_t n = 0;
      const auto res = std::from_chars(env, env + std::strlen(env), n);
      if (res.ec == std::errc{} && n > 0) return n;
    }
    const auto hw = std::thread::hardware_concurrency();
    return static_cast<std::size_t>(hw == 0 ? 1 : hw);
  }();
  return value;
}

}  // namespace

std::size_t thread_count() {
  const auto n = g_override.load(std::memory_order_relaxed);
  return n > 0 ? n : default_thread_count();
}

void set_thread_count(std::size_t n) { g_override.store(n, std::memory_order_relaxed); }

}  // namespace wsskit
