#include "pufent/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>

namespace pufent {

namespace {

// Stream index reserved for the Poisson draw of a shard's sample count.
constexpr std::uint64_t kPoissonStreamIndex = ~std::uint64_t{0};

struct KeyHash {
  using is_transparent = void;
  std::size_t operator()(std::span<const std::int64_t> key) const {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (std::int64_t x : key) {
      h ^= static_cast<std::uint64_t>(x);
      h *= 0x100000001B3ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
  std::size_t operator()(const ClassKey& key) const {
    return (*this)(std::span<const std::int64_t>(key));
  }
};

struct KeyEqual {
  using is_transparent = void;
  bool operator()(std::span<const std::int64_t> a, std::span<const std::int64_t> b) const {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  bool operator()(const ClassKey& a, std::span<const std::int64_t> b) const {
    return (*this)(std::span<const std::int64_t>(a), b);
  }
  bool operator()(std::span<const std::int64_t> a, const ClassKey& b) const {
    return (*this)(a, std::span<const std::int64_t>(b));
  }
  bool operator()(const ClassKey& a, const ClassKey& b) const { return a == b; }
};

using CountTable = std::unordered_map<ClassKey, std::uint64_t, KeyHash, KeyEqual>;

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t sum;
  if (__builtin_add_overflow(a, b, &sum)) throw IntegrityError("count overflow in merge");
  return sum;
}

}  // namespace

void validate(const SamplerConfig& config) {
  if (config.n < 1 || config.n > kMaxN) {
    throw std::invalid_argument("n must be in [1, " + std::to_string(kMaxN) + "]");
  }
  if (config.rounds < 1 && !config.poissonized) {
    throw std::invalid_argument("rounds must be at least 1");
  }
  if (config.shards < 1) throw std::invalid_argument("shards must be at least 1");
}

ClassMap empty_map(const SamplerConfig& config) {
  ClassMap map;
  map.n = config.n;
  map.distribution = config.distribution;
  map.seed = config.seed;
  map.shards = config.shards;
  if (config.poissonized) map.poisson_n = 0;
  return map;
}

std::uint64_t shard_share(std::uint64_t total, std::uint32_t shards, std::uint32_t shard) {
  return total / shards + (shard < total % shards ? 1 : 0);
}

WeightVector draw_weights(std::uint64_t seed, std::uint32_t shard, std::uint64_t index,
                          Distribution dist, int n) {
  CounterStream stream(seed, shard, index);
  WeightVector w(n);
  draw_weights(stream, dist, w);
  return w;
}

ClassMap run_shard(const SamplerConfig& config, std::uint32_t shard) {
  validate(config);
  if (shard >= config.shards) throw std::invalid_argument("shard index out of range");

  ClassMap map = empty_map(config);
  std::uint64_t samples = shard_share(config.rounds, config.shards, shard);
  if (config.poissonized) {
    map.poisson_n = samples;
    if (samples > 0) {
      CounterStream stream(config.seed, shard, kPoissonStreamIndex);
      std::poisson_distribution<std::uint64_t> poisson(static_cast<double>(samples));
      samples = poisson(stream);
    }
  }

  const int n = config.n;
  WeightVector w(n);
  ChowVector p(n);
  ChowKernel kernel;
  CountTable table;
  std::uint64_t rejected = 0;

  for (std::uint64_t index = 0; index < samples; ++index) {
    CounterStream stream(config.seed, shard, index);
    for (;;) {
      draw_weights(stream, config.distribution, w);
      for (double& x : w) x = std::abs(x);
      std::sort(w.begin(), w.end(), std::greater<>());
      if (kernel.compute(w, p)) break;
      // Resample the whole vector from the same stream.
      ++rejected;
    }
    auto it = table.find(std::span<const std::int64_t>(p));
    if (it != table.end()) {
      ++it->second;
    } else {
      table.emplace(p, 1);
    }
  }

  map.rounds = samples;
  map.rejected = rejected;
  for (auto& [key, count] : table) map.counts.emplace(key, count);
  return map;
}

ClassMap run(const SamplerConfig& config, unsigned threads) {
  validate(config);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, config.shards);

  std::vector<ClassMap> shard_maps(config.shards);
  if (threads <= 1) {
    for (std::uint32_t k = 0; k < config.shards; ++k) shard_maps[k] = run_shard(config, k);
  } else {
    std::vector<std::jthread> workers;
    std::vector<std::exception_ptr> failures(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        try {
          for (std::uint32_t k = t; k < config.shards; k += threads) {
            shard_maps[k] = run_shard(config, k);
          }
        } catch (...) {
          failures[t] = std::current_exception();
        }
      });
    }
    workers.clear();
    for (auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }
  return merge(shard_maps);
}

ClassMap run_poissonized(SamplerConfig config, std::uint64_t poisson_n, unsigned threads) {
  config.poissonized = true;
  config.rounds = poisson_n;
  return run(config, threads);
}

ClassMap merge(std::span<const ClassMap> maps) {
  if (maps.empty()) throw std::invalid_argument("merge needs at least one map");
  const ClassMap& first = maps.front();
  ClassMap out;
  out.n = first.n;
  out.distribution = first.distribution;
  out.seed = first.seed;
  out.shards = first.shards;
  out.exact = first.exact;
  out.poisson_n = first.poisson_n ? std::optional<std::uint64_t>(0) : std::nullopt;

  bool same_origin = true;
  std::uint64_t shard_sum = 0;
  for (const ClassMap& map : maps) {
    if (map.n != first.n) throw IncompatibleMaps("cannot merge maps with different n");
    if (map.distribution != first.distribution) {
      throw IncompatibleMaps("cannot merge maps with different weight distributions");
    }
    if (map.poisson_n.has_value() != first.poisson_n.has_value()) {
      throw IncompatibleMaps("cannot merge Poissonized and fixed-size maps");
    }
    if (map.exact != first.exact) throw IncompatibleMaps("cannot merge census and sampled maps");
    same_origin = same_origin && map.seed == first.seed && map.shards == first.shards;
    shard_sum += map.shards;

    out.rounds = checked_add(out.rounds, map.rounds);
    out.rejected = checked_add(out.rejected, map.rejected);
    if (map.poisson_n) out.poisson_n = checked_add(*out.poisson_n, *map.poisson_n);
    for (const auto& [key, count] : map.counts) {
      auto [it, inserted] = out.counts.emplace(key, count);
      if (!inserted) it->second = checked_add(it->second, count);
    }
  }
  if (!same_origin) {
    out.seed = 0;
    out.shards = static_cast<std::uint32_t>(std::min<std::uint64_t>(shard_sum, UINT32_MAX));
  }
  return out;
}

void check_integrity(const ClassMap& map) {
  if (map.n < 1 || map.n > kMaxN) throw IntegrityError("n out of range");
  std::uint64_t total = 0;
  for (const auto& [key, count] : map.counts) {
    if (static_cast<int>(key.size()) != map.n) throw IntegrityError("key length differs from n");
    if (!satisfies_chow_invariants(key)) {
      throw IntegrityError("key violates Chow parity or bound invariants");
    }
    if (!is_canonical(key)) throw IntegrityError("key is not canonical");
    if (count == 0) throw IntegrityError("zero count recorded");
    if (__builtin_add_overflow(total, count, &total)) throw IntegrityError("count overflow");
  }
  if (total != map.rounds) {
    throw IntegrityError("counts sum to " + std::to_string(total) + " but rounds is " +
                         std::to_string(map.rounds));
  }
}

}  // namespace pufent
