#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace nir {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> n{0};  // 0 = not set, resolve lazily
  return n;
}
}  // namespace detail

/// Number of worker threads used by data-parallel kernels.
/// THICKNESS_THREADS overrides any programmatic setting.
inline unsigned thread_count() {
  if (const char* env = std::getenv("THICKNESS_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned set = detail::thread_setting().load();
  if (set > 0) return set;
  return std::max(1u, std::thread::hardware_concurrency());
}

inline void set_thread_count(unsigned n) { detail::thread_setting().store(n); }

/// Runs body(chunk_index, begin, end) over [0, n) split into fixed chunks.
///
/// The chunk layout depends only on n and grain, never on the thread count,
/// so a caller that reduces per-chunk results in chunk order gets the same
/// bits on any number of threads.
template <typename Body>
void for_each_chunk(std::size_t n, std::size_t grain, Body&& body) {
  if (n == 0) return;
  grain = std::max<std::size_t>(grain, 1);
  const std::size_t chunks = (n + grain - 1) / grain;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c, c * grain, std::min(n, (c + 1) * grain));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = next++; c < chunks; c = next++) body(c, c * grain, std::min(n, (c + 1) * grain));
      } catch (...) {
        errors[w] = std::current_exception();
        next = chunks;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Number of chunks for_each_chunk will produce.
inline std::size_t chunk_count(std::size_t n, std::size_t grain) {
  grain = std::max<std::size_t>(grain, 1);
  return (n + grain - 1) / grain;
}

}  // namespace nir
