#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace gnp {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over a static partition of [0, count). Every index is
// owned by exactly one invocation, so writers that only touch their own
// slots produce bit-identical results for any thread count.
template <typename Fn>
void parallel_chunks(std::size_t count, int threads, Fn&& fn) {
  const int t = resolve_threads(threads);
  if (t <= 1 || count <= 1) {
    if (count > 0) fn(std::size_t{0}, count);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(t), count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&fn, begin, end] {
      if (begin < end) fn(begin, end);
    });
  }
  for (auto& th : pool) th.join();
}

// Per-index variant of parallel_chunks.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  parallel_chunks(count, threads, [&fn](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace gnp
