#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace contractio {

/// Worker count used by the parallel loops. Initialised from the
/// CONTRACTIO_THREADS environment variable (0 or unset = hardware threads).
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Parses a CONTRACTIO_THREADS value; throws std::invalid_argument.
std::size_t parse_thread_count(const char* text);

/// Runs fn(begin, end) over contiguous chunks of [0, n). Chunks are fixed by
/// n and the worker count, so callers that write into per-index slots get
/// results independent of scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t min_chunk = 64) {
  const std::size_t workers =
      std::min(thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
  if (workers <= 1) {
    if (n > 0) fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

}  // namespace contractio
