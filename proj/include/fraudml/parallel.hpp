#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace fraudml {

inline int effective_threads(int n_threads) {
  if (n_threads > 0) return n_threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over a static partition of [0, n). Iterations must be
// independent; results land in caller-owned slots, so the schedule cannot
// affect the outcome.
inline void parallel_chunks(std::size_t n, int n_threads,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  const int workers =
      static_cast<int>(std::min<std::size_t>(effective_threads(n_threads), n));
  if (n == 0) return;
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace fraudml
