#include "geomlab/parallel.hpp"

#include <atomic>

namespace geomlab {

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_thread_count(unsigned threads) { g_threads.store(threads == 0 ? 1 : threads); }

unsigned thread_count() { return g_threads.load(); }

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace geomlab
