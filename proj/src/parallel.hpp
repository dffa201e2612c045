#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace rblab::detail {

// Runs work(k) for k in [0, items) on a pool of threads. Items are claimed
// dynamically, so work must write only to slot k of its outputs. The first
// exception of any worker is rethrown after all workers have joined.
template <class F>
void parallel_for(size_t items, int threads, F&& work) {
  if (threads <= 1 || items < 2) {
    for (size_t k = 0; k < items; ++k) work(k);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (size_t k = next++; k < items; k = next++) work(k);
      } catch (...) {
        errors[static_cast<size_t>(t)] = std::current_exception();
        next = items;
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// splitmix64 finalizer; the basis of every per-item RNG stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace rblab::detail
