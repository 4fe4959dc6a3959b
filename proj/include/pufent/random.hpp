#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>

namespace pufent {

enum class Distribution { gaussian, uniform, laplace };

std::string_view to_string(Distribution dist);
/// Throws std::invalid_argument for unknown names.
Distribution parse_distribution(std::string_view name);

/// Counter-based generator: output k of the stream keyed by
/// (seed, shard, index) is a pure function of those four integers, so any
/// draw can be reproduced without replaying its predecessors.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  CounterStream(std::uint64_t seed, std::uint64_t shard, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Fills `out` with i.i.d. draws from `dist`: N(0,1), U(-1,1) or Laplace(0,1).
void draw_weights(CounterStream& stream, Distribution dist, std::span<double> out);

}  // namespace pufent
