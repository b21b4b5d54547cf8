#ifndef BSP_PARALLEL_HPP
#define BSP_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

#include "bsp/types.hpp"

namespace bsp {

/// Worker count: hardware concurrency capped by the BSPLINE_THREADS
/// environment variable (values < 1 mean serial).
inline unsigned thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("BSPLINE_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < n)
      n = static_cast<unsigned>(cap);
    if (cap == 1 || cap < 0) n = 1;
  }
  return n;
}

/// Runs fn(i) for i in [0, n) on a block partition of the index range.
/// Callers write results by index, so the output is identical for any
/// worker count.
template <typename Fn>
void parallel_for(Index n, Fn&& fn) {
  const unsigned workers =
      std::min<unsigned>(thread_count(), n > 0 ? static_cast<unsigned>(n) : 1);
  if (workers <= 1 || n <= 1) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const Index chunk = (n + static_cast<Index>(workers) - 1) / static_cast<Index>(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const Index begin = static_cast<Index>(w) * chunk;
    const Index end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (Index i = begin; i < end; ++i) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace bsp

#endif  // BSP_PARALLEL_HPP
