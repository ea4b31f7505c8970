#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace broodsim {

// Run fn(begin, end) over [0, count) split into one contiguous chunk per
// worker. fn must only write to locations owned by its own indices; results
// must therefore be independent of the chunking, which keeps every caller's
// output identical for any worker count.
template <typename Fn>
void parallel_chunks(std::size_t count, int workers, Fn&& fn) {
  if (count == 0) return;
  const std::size_t n_threads =
      workers <= 1 ? 1
                   : std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  if (n_threads == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  const std::size_t chunk = (count + n_threads - 1) / n_threads;
  for (std::size_t t = 0; t < n_threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (std::thread& th : pool) th.join();
}

// Resolve a worker-count request: n <= 0 means "use the hardware".
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace broodsim
