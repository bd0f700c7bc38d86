#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace ecd {

/// Number of workers used when a caller passes 0.
inline std::size_t default_worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<std::size_t>(hw);
}

/// Evaluates fn(i) for i in [0, count) on a bounded worker pool and returns
/// the results in index order. Workers pull indices from a shared counter,
/// so completion order never affects the output. If any call throws, the
/// exception from the lowest failing index is rethrown after all workers
/// finish.
template <typename Fn>
auto parallel_map(std::size_t count, std::size_t workers, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  if (workers == 0) workers = default_worker_count();
  workers = std::max<std::size_t>(1, std::min(workers, count));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace ecd
