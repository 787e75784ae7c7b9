#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace causalsurv {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Run fn(i) for i in [0, count) on up to n_threads threads (0 = hardware).
// Work is statically partitioned; fn must write only to slot i of any shared
// output so results are independent of the thread count.
template <typename Fn>
void parallel_for(std::size_t count, unsigned n_threads, Fn&& fn) {
  const unsigned threads = resolve_threads(n_threads);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::exception_ptr> errors(used);
  std::vector<std::thread> workers;
  workers.reserve(used);
  for (unsigned w = 0; w < used; ++w) {
    workers.emplace_back([&, w]() {
      try {
        for (std::size_t i = w; i < count; i += used) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace causalsurv
