//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_PARALLEL_HPP_
#define MOLRL_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace molrl {

/// Runs fn(0..n_tasks-1) on up to `workers` threads. Tasks must write only
/// to their own slots; the first failing task (by index) is rethrown.
template <typename F>
void parallel_for(int n_tasks, int workers, F &&fn) {
  workers = std::clamp(workers, 1, std::max(n_tasks, 1));
  if (workers == 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n_tasks);
  std::atomic<int> next{0};
  auto run = [&]() {
    for (int i = next++; i < n_tasks; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto &t : pool) t.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace molrl

#endif  // MOLRL_PARALLEL_HPP_
