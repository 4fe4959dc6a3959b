#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pufent/puf_core.hpp"
#include "pufent/random.hpp"

namespace pufent {

struct SamplerConfig {
  int n = 1;
  /// Number of samples, or the Poisson parameter N when `poissonized`.
  std::uint64_t rounds = 1;
  std::uint64_t seed = 0;
  std::uint32_t shards = 1;
  Distribution distribution = Distribution::gaussian;
  bool poissonized = false;
};

/// Throws std::invalid_argument if the configuration is unusable.
void validate(const SamplerConfig& config);

/// Observed canonical classes and their counts, plus the run metadata needed
/// to merge and persist it.
struct ClassMap {
  int n = 1;
  /// Empty for exact census maps, which are not tied to a weight model.
  std::optional<Distribution> distribution = Distribution::gaussian;
  std::uint64_t seed = 0;
  std::uint32_t shards = 1;
  std::uint64_t rounds = 0;
  std::optional<std::uint64_t> poisson_n;
  std::uint64_t rejected = 0;
  /// Census map: counts are exact class sizes rather than samples.
  bool exact = false;
  /// Keys in lexicographically descending order.
  std::map<ClassKey, std::uint64_t, std::greater<>> counts;

  bool empty() const { return rounds == 0; }
  friend bool operator==(const ClassMap&, const ClassMap&) = default;
};

/// Empty map carrying the metadata of `config`.
ClassMap empty_map(const SamplerConfig& config);

/// Number of samples (or Poisson mass) assigned to `shard`: an even split,
/// with the remainder going to the lowest shard indices.
std::uint64_t shard_share(std::uint64_t total, std::uint32_t shards, std::uint32_t shard);

/// Weight vector number `index` of `shard`; independent of how many shards
/// the run uses.
WeightVector draw_weights(std::uint64_t seed, std::uint32_t shard, std::uint64_t index,
                          Distribution dist, int n);

/// Samples one shard of the run described by `config`. The shard's map
/// echoes the run's seed and shard count; merging all shards gives run().
ClassMap run_shard(const SamplerConfig& config, std::uint32_t shard);

/// Draws, canonicalizes and classifies `config.rounds` weight vectors (or
/// Poisson(config.rounds) of them when poissonized), over `config.shards`
/// independent streams sampled on up to `threads` workers (0 = hardware
/// concurrency). The result does not depend on `threads`.
ClassMap run(const SamplerConfig& config, unsigned threads = 0);

/// run() with the sample count drawn from Poisson(poisson_n).
ClassMap run_poissonized(SamplerConfig config, std::uint64_t poisson_n, unsigned threads = 0);

/// Sums counts key by key. Maps must share n and distribution; Poissonized
/// and plain maps do not mix. Poisson parameters add. Seed and shard count
/// are kept when all inputs agree; otherwise the seed becomes 0 and the
/// shard counts add.
ClassMap merge(std::span<const ClassMap> maps);

/// Throws IntegrityError if a key breaks a Chow invariant, is not canonical,
/// or the counts do not sum to `rounds`.
void check_integrity(const ClassMap& map);

}  // namespace pufent
