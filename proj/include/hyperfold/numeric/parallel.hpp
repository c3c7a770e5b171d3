#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hyperfold::numeric {

namespace detail {
inline std::atomic<unsigned>& default_thread_count() {
  static std::atomic<unsigned> count{1};
  return count;
}
}  // namespace detail

/// Worker count used by parallel_for when none is given. Results never
/// depend on it: each index writes its own slot and reductions happen
/// afterwards in index order.
inline void set_default_threads(unsigned n) { detail::default_thread_count() = std::max(1u, n); }
inline unsigned default_threads() { return detail::default_thread_count(); }

/// Runs body(i) for i in [0, n) over contiguous blocks.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned threads = 0) {
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t block = (n + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * block, hi = std::min(n, lo + block);
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace hyperfold::numeric
