#pragma once
#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rmb {

// requested > 0 wins, then RMBLOCK_THREADS, then 1.
int resolve_threads(int requested);

// Runs f(i) for i in [0, n) on up to `threads` workers. Work is split into contiguous chunks;
// callers write results by index, so the outcome does not depend on the worker count.
template <typename F>
void parallel_for(long n, int threads, F&& f) {
  threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, n)));
  if (threads == 1) {
    for (long i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex m;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    const long lo = n * w / threads, hi = n * (w + 1) / threads;
    pool.emplace_back([&, lo, hi] {
      try {
        for (long i = lo; i < hi; ++i) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(m);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace rmb
