#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace rig {

// Splits [0, n) into `threads` contiguous blocks and runs body(begin, end, t)
// on each. Blocks depend only on (n, threads); callers that need results
// independent of the thread count must merge associatively, or key their
// randomness by item index (never by block). The first exception, in block
// order, is rethrown.
template <class Body>
void parallel_blocks(std::size_t n, unsigned threads, Body&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2) {
    body(std::size_t{0}, n, 0u);
    return;
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = n * t / threads, end = n * (t + 1) / threads;
    pool.emplace_back([&, begin, end, t] {
      try {
        body(begin, end, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace rig
