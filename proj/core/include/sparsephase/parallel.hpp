#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace sparsephase {

/// Runs fn(begin, end, worker) over `workers` contiguous chunks of [0, total).
/// Callers are responsible for merging worker outputs in a fixed order so
/// results do not depend on the worker count.
inline void parallel_chunks(std::uint64_t total, int workers,
                            const std::function<void(std::uint64_t, std::uint64_t, int)>& fn) {
  if (total == 0) return;
  if (workers < 1) workers = 1;
  const std::uint64_t w = static_cast<std::uint64_t>(workers) < total
                              ? static_cast<std::uint64_t>(workers)
                              : total;
  if (w == 1) {
    fn(0, total, 0);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(w));
  const std::uint64_t chunk = total / w;
  const std::uint64_t rem = total % w;
  std::uint64_t begin = 0;
  for (std::uint64_t i = 0; i < w; ++i) {
    const std::uint64_t end = begin + chunk + (i < rem ? 1 : 0);
    threads.emplace_back(fn, begin, end, static_cast<int>(i));
    begin = end;
  }
  for (auto& t : threads) t.join();
}

}  // namespace sparsephase
