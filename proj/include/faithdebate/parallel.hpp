#ifndef FAITHDEBATE_PARALLEL_HPP
#define FAITHDEBATE_PARALLEL_HPP

#include <exception>
#include <thread>
#include <vector>

namespace faithdebate {

// Runs f(0..n-1), optionally one thread per index. Results must be written
// to per-index slots by the caller, so outcomes are identical for serial and
// parallel execution; the first failing index's exception is rethrown.
template <typename F>
void parallel_for(int n, bool parallel, F&& f) {
  if (!parallel || n <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    threads.emplace_back([&, i] {
      try {
        f(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace faithdebate

#endif  // FAITHDEBATE_PARALLEL_HPP
