#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace pkgnet {

// Runs fn(i) for every i in [0, count). With jobs > 1 the iterations are
// spread over worker threads pulling from a shared counter. Each iteration
// must write only to its own output slot; under that contract the result is
// identical for any job count. If iterations throw, the exception from the
// lowest index is rethrown, again independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  if (count == 0) return;
  if (jobs <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  const auto workers =
      static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  std::atomic<std::size_t> cursor{0};
  std::vector<std::pair<std::size_t, std::exception_ptr>> failures(
      workers, {count, nullptr});

  auto work = [&](unsigned worker) {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        if (i < failures[worker].first) {
          failures[worker] = {i, std::current_exception()};
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  for (auto& t : pool) t.join();

  std::size_t first = count;
  std::exception_ptr eptr;
  for (const auto& [idx, ex] : failures) {
    if (ex && idx < first) {
      first = idx;
      eptr = ex;
    }
  }
  if (eptr) std::rethrow_exception(eptr);
}

}  // namespace pkgnet
