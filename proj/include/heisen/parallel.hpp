#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace heisen {

/// Static block partition of [lo, hi) over at most `threads` workers.
/// Each index is processed exactly once by exactly one worker, so results
/// written to per-index slots are identical for any worker count.
template <typename Fn>
void parallelFor(std::int64_t lo, std::int64_t hi, int threads, Fn&& fn) {
  const std::int64_t count = hi - lo;
  if (count <= 0) return;
  int workers = std::max(1, threads);
  workers = static_cast<int>(
      std::min<std::int64_t>(workers, count));
  if (workers == 1) {
    for (std::int64_t i = lo; i < hi; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t a = lo + w * chunk;
    const std::int64_t b = std::min(hi, a + chunk);
    if (a >= b) break;
    pool.emplace_back([&, w, a, b] {
      try {
        for (std::int64_t i = a; i < b; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace heisen
