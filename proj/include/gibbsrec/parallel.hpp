#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gibbsrec {

// Runs fn(trial) once for every trial in [0, trials).  Each call must write
// only to its own output slot, so results are identical for any worker count;
// workers only change the schedule.
template <typename Fn>
void parallel_for_trials(std::int64_t trials, int workers, Fn&& fn) {
  if (workers <= 1 || trials <= 1) {
    for (std::int64_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    while (true) {
      const std::int64_t t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = workers > static_cast<int>(trials)
                    ? static_cast<int>(trials)
                    : workers;
  pool.reserve(n);
  for (int i = 0; i < n; ++i) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace gibbsrec
