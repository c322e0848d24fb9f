#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

#include "triplex/config.hpp"

namespace triplex::detail {

// Runs fn(worker, begin, end) over a contiguous split of [0, n).
// Workers write only worker-private state; callers merge afterwards, so the
// result is independent of the worker count.
template <class F>
void parallel_chunks(std::size_t n, F&& fn) {
  const std::size_t nw =
      std::min<std::size_t>(static_cast<std::size_t>(threads()), n ? n : 1);
  if (nw <= 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nw);
  const std::size_t step = (n + nw - 1) / nw;
  for (std::size_t w = 0; w < nw; ++w) {
    const std::size_t b = w * step;
    const std::size_t e = std::min(n, b + step);
    pool.emplace_back([&fn, w, b, e] { fn(w, b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace triplex::detail
