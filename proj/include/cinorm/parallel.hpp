#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace cinorm {

/// Runs body(begin, end, shard) over a static partition of [0, n) into
/// `threads` contiguous shards. Shard k always covers the same range for a
/// given (n, threads), and callers merge per-shard results in shard order,
/// so output never depends on scheduling. The first exception is rethrown.
template <class Body>
void parallel_shards(std::size_t n, unsigned threads, Body&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2) {
    body(std::size_t{0}, n, 0u);
    return;
  }
  const std::size_t shards = std::min<std::size_t>(threads, n);
  std::vector<std::exception_ptr> errors(shards);
  std::vector<std::thread> pool;
  pool.reserve(shards);
  for (std::size_t k = 0; k < shards; ++k) {
    const std::size_t begin = n * k / shards;
    const std::size_t end = n * (k + 1) / shards;
    pool.emplace_back([&, begin, end, k] {
      try {
        body(begin, end, static_cast<unsigned>(k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Number of shards parallel_shards will use.
inline std::size_t shard_count(std::size_t n, unsigned threads) {
  threads = std::max(1u, threads);
  return threads == 1 || n < 2 ? 1 : std::min<std::size_t>(threads, n);
}

}  // namespace cinorm
