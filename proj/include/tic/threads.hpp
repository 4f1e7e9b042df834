#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace tic {

// Global worker count for parallel_for. 1 (the default) runs everything on
// the calling thread; the CLI maps --threads here.
void set_thread_count(int n);
int thread_count();

// Invokes fn(i) for i in [0, n). Used only where writes for distinct i are
// disjoint, so results are identical for any thread count.
template <typename F>
void parallel_for(std::int64_t n, F&& fn) {
  int nt = thread_count();
  if (nt <= 1 || n <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (std::int64_t(nt) > n) nt = int(n);
  std::vector<std::thread> workers;
  workers.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    workers.emplace_back([&, t]() {
      std::int64_t lo = n * t / nt;
      std::int64_t hi = n * (t + 1) / nt;
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : workers) th.join();
}

}  // namespace tic
