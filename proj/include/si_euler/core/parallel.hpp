#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace si_euler {

/// Worker count: SI_EULER_THREADS if set and positive, else the hardware count.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("SI_EULER_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/**
 * @brief Runs body(begin, end) over contiguous chunks of [0, n).
 *
 * Chunks are independent, so results do not depend on the thread count.
 * Small ranges run inline.
 */
template <typename Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_chunk = 2048) {
  const unsigned budget = thread_budget();
  const std::size_t chunks =
      std::min<std::size_t>(budget, std::max<std::size_t>(1, n / min_chunk));
  if (chunks <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(chunks);
  const std::size_t per = (n + chunks - 1) / chunks;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t b = c * per;
    const std::size_t e = std::min(n, b + per);
    if (b >= e) break;
    workers.emplace_back([&, b, e, c] {
      try {
        body(b, e);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace si_euler
