#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace geomlab {

/// Process-wide worker count used by the map-reduce stages. Defaults to 1.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Runs fn(i) for i in [0, count) over a static partition of the index range.
/// Each index must write only to its own output slot; results are then
/// independent of the number of threads.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = count * w / workers;
      const std::size_t end = count * (w + 1) / workers;
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Pairwise (tree) summation. The reduction tree depends only on the length,
/// so the result is reproducible bit for bit.
double pairwise_sum(std::span<const double> values);

}  // namespace geomlab
