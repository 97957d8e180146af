#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace geomlab {

/// Deterministic random stream with counter-based splitting.
///
/// Every stream carries a 64-bit key. `split(name, index)` derives a child
/// key from the parent key alone, so children do not depend on how many
/// numbers the parent has produced. One global seed can therefore fan out to
/// named substreams (graph, landmarks, seeds per level, restarts...) and
/// parallel workers get identical numbers regardless of scheduling.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  [[nodiscard]] RandomStream split(std::string_view name, std::uint64_t index = 0) const;
  [[nodiscard]] std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal deviate (Box-Muller, no cached spare).
  double normal();

  // UniformRandomBitGenerator interface, for std::shuffle and friends.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace geomlab
