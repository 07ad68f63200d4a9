#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace loopq {

// Worker count: ENGINE_THREADS caps it when set (values < 1 mean 1),
// otherwise hardware concurrency. Results must be written to disjoint
// slots by index so the output is deterministic regardless of the count.
inline int engine_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("ENGINE_THREADS")) {
    int cap = std::atoi(env);
    if (cap < 1) cap = 1;
    if (cap < n) n = cap;
  }
  return n;
}

// Runs fn(i) for i in [0, count) across up to engine_threads() workers.
inline void parallel_for_index(int count, const std::function<void(int)>& fn) {
  int workers = std::min(engine_threads(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace loopq
