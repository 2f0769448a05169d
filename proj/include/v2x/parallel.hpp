#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace v2x {

// Runs fn(0..n-1) across up to `jobs` worker threads. Each index is claimed
// exactly once; callers write results into index-addressed slots, so the
// outcome never depends on the number of workers or scheduling order.
template <class F>
void parallel_for(int n, int jobs, F&& fn) {
  if (n <= 0) return;
  jobs = std::min(jobs < 1 ? 1 : jobs, n);
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace v2x
