#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace visrec::detail {

// Splits [0, count) into contiguous chunks, one per worker. fn(begin, end)
// must only write state owned by its chunk.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (n <= 1) {
    if (count > 0) fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(n - 1);
  const std::size_t chunk = (count + n - 1) / n;
  for (std::size_t t = 1; t < n; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  fn(std::size_t{0}, std::min(count, chunk));
}

}  // namespace visrec::detail
