#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace swarmdet {

// threads <= 0 resolves to SWARMDET_THREADS if set, else hardware concurrency.
int resolve_threads(int threads);

// Static contiguous partition of [begin, end) over `threads` workers.
// Each index is handled by exactly one worker, so results are independent of
// the thread count as long as fn(i) writes only to index-i outputs.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, int threads, Fn&& fn) {
  const std::size_t total = end - begin;
  const int nt = resolve_threads(threads);
  if (total == 0) return;
  if (nt <= 1 || total == 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(nt), total);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (total + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = begin + w * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace swarmdet
