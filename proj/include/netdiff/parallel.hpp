#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace netdiff {

// Static partition of [0, count) across `threads` workers. Each item must
// write only to its own preallocated slot; reductions happen afterwards on
// the caller's thread, so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  threads = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace netdiff
