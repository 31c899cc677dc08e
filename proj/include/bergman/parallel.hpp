#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "bergman/random.hpp"

namespace bergman {

/// Runs task(trial, derive_seed(master, trial)) for trial in [0, count) on up
/// to `threads` workers (0 = hardware concurrency). Seeds are fixed before
/// scheduling and results are stored by trial id, so the output does not
/// depend on the number of workers.
template <class Task>
auto run_trials(std::size_t count, std::uint64_t master_seed, Task task, unsigned threads = 1)
    -> std::vector<decltype(task(std::size_t{}, std::uint64_t{}))> {
  using Result = decltype(task(std::size_t{}, std::uint64_t{}));
  std::vector<Result> results(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        results[i] = task(i, derive_seed(master_seed, i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace bergman
