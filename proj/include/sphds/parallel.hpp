#ifndef SPHDS_PARALLEL_HPP
#define SPHDS_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace sphds {

/// Calls fn(begin, end) over contiguous blocks of [0, n) on up to `threads`
/// threads. Blocks are fixed by n and the thread count, so callers writing
/// into per-index slots get identical results for any thread count.
template <class Fn>
void parallel_blocks(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2 * threads) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t block = (n + threads - 1) / threads;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t begin = 0; begin < n; begin += block) {
    const std::size_t end = std::min(n, begin + block);
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

}  // namespace sphds

#endif  // SPHDS_PARALLEL_HPP
