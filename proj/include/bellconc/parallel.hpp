#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace bellconc {

/// Number of workers actually used for `count` items (0 means hardware concurrency).
inline unsigned resolve_workers(unsigned workers, std::uint64_t count) {
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));
}

/// Calls body(begin, end, worker) on disjoint contiguous ranges covering
/// [0, count). The first exception thrown by any worker is rethrown.
inline void parallel_ranges(std::uint64_t count, unsigned workers,
                            const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& body) {
  workers = resolve_workers(workers, count);
  if (workers == 1) {
    body(0, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::uint64_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min(count, w * chunk);
    const std::uint64_t end = std::min(count, begin + chunk);
    pool.emplace_back([&body, &errors, begin, end, w] {
      try {
        body(begin, end, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace bellconc
