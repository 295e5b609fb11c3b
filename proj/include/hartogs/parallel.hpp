#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace hartogs {

/// Worker count: hardware concurrency, capped by HARTOGS_QUANT_THREADS when set.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HARTOGS_QUANT_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // unparsable cap is ignored
    }
  }
  return n;
}

/// Engine for one sample block. Streams depend only on (seed, stream, block), so
/// results do not depend on how blocks are distributed across shards.
inline std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(block),
                    static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

/// Runs fn(block) for block in [0, n_blocks) over `shards` workers (0 = worker_count()).
/// The first exception thrown by any block is rethrown on the calling thread.
template <class Fn>
void run_blocks(std::size_t n_blocks, unsigned shards, Fn&& fn) {
  if (shards == 0) shards = worker_count();
  shards = static_cast<unsigned>(std::min<std::size_t>(shards, std::max<std::size_t>(1, n_blocks)));
  if (shards <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(shards);
    for (unsigned s = 0; s < shards; ++s) {
      workers.emplace_back([&] {
        for (std::size_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) {
          try {
            fn(b);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(n_blocks);
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hartogs
