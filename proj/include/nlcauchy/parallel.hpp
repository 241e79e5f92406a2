#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nlcauchy {

/// Worker count used when the caller does not pin one: hardware concurrency,
/// capped by the NLCAUCHY_WORKERS environment variable if that is set to a
/// positive integer.
inline int default_workers() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("NLCAUCHY_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = std::min<long>(n, v);
  }
  return n;
}

/// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
/// executed exactly once; bodies must write to disjoint slots, since no
/// ordering between indices is promised. The first exception thrown by any
/// body is rethrown on the calling thread after all threads join.
template <typename Body>
void parallel_for(long long count, int workers, Body&& body) {
  if (count <= 0) return;
  workers = static_cast<int>(std::max<long long>(1, std::min<long long>(workers, count)));
  if (workers == 1) {
    for (long long i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const long long chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long long lo = static_cast<long long>(w) * chunk;
    const long long hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (long long i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace nlcauchy
