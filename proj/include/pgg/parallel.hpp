#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace pgg {

/// Number of worker threads to use when the caller passes 0.
inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Splits [0, n) into `shards` contiguous ranges and runs fn(begin, end, shard)
/// for each on its own thread. Shard boundaries depend only on n and shards,
/// so results indexed by shard are reproducible. The first exception thrown
/// by any shard is rethrown after all threads join.
template <class Fn>
void parallel_for(std::uint64_t n, unsigned shards, Fn&& fn) {
  if (shards == 0) shards = default_threads();
  shards = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(shards, n)));
  if (shards == 1) {
    fn(std::uint64_t{0}, n, 0u);
    return;
  }
  std::vector<std::exception_ptr> errors(shards);
  std::vector<std::thread> pool;
  pool.reserve(shards);
  for (unsigned s = 0; s < shards; ++s) {
    const std::uint64_t begin = n * s / shards;
    const std::uint64_t end = n * (s + 1) / shards;
    pool.emplace_back([&, begin, end, s] {
      try {
        fn(begin, end, s);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace pgg
