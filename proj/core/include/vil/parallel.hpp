#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace vil {

/// Contiguous-chunk parallel loop. Each index is visited exactly once and results
/// must be written to per-index slots; reductions happen afterwards in fixed order,
/// so outputs are bitwise independent of the thread count.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t, std::size_t)>& run_chunk) {
  if (threads <= 1 || count < 256) {
    run_chunk(0, count);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (count + nt - 1) / nt;
  for (std::size_t w = 0; w < nt; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&run_chunk, lo, hi] { run_chunk(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace vil
