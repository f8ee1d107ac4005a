#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace becstate {

/// Number of workers to use for a request of `requested` (0 = all cores).
inline std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(worker, item) for item in [0, n) on up to `workers` threads. Items are handed
/// out dynamically, so fn must not depend on which worker runs an item. make_state(worker)
/// builds per-worker scratch (transforms, buffers) passed as the first argument.
template <typename MakeState, typename Fn>
void parallel_for(std::size_t n, std::size_t workers, MakeState make_state, Fn fn) {
  workers = std::min(resolve_workers(workers), std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&](std::size_t w) {
    try {
      auto state = make_state(w);
      for (std::size_t i = next++; i < n; i = next++) fn(state, i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = n;
    }
  };
  if (workers <= 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace becstate
