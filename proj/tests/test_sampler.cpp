#include <doctest.h>

#include <cmath>

#include "pufent/estimators.hpp"
#include "pufent/sampler.hpp"

using namespace pufent;

namespace {

SamplerConfig config_for(int n, std::uint64_t rounds, std::uint64_t seed, std::uint32_t shards = 1) {
  SamplerConfig config;
  config.n = n;
  config.rounds = rounds;
  config.seed = seed;
  config.shards = shards;
  return config;
}

std::uint64_t total_count(const ClassMap& map) {
  std::uint64_t total = 0;
  for (const auto& [key, count] : map.counts) total += count;
  return total;
}

}  // namespace

TEST_CASE("draw_weights is a pure function of (seed, shard, index)") {
  for (Distribution dist : {Distribution::gaussian, Distribution::uniform, Distribution::laplace}) {
    const WeightVector a = draw_weights(1, 0, 0, dist, 7);
    const WeightVector b = draw_weights(1, 0, 0, dist, 7);
    CHECK(a == b);
    CHECK(a != draw_weights(1, 1, 0, dist, 7));
    CHECK(a != draw_weights(1, 0, 1, dist, 7));
    CHECK(a != draw_weights(2, 0, 0, dist, 7));
  }
}

TEST_CASE("draw_weights moments") {
  constexpr int kDraws = 1'000'000;
  for (Distribution dist : {Distribution::gaussian, Distribution::uniform, Distribution::laplace}) {
    CAPTURE(to_string(dist));
    // Standard deviations of one coordinate: 1, 1/sqrt(3), sqrt(2).
    const double sigma = dist == Distribution::gaussian  ? 1.0
                         : dist == Distribution::uniform ? 1.0 / std::sqrt(3.0)
                                                         : std::sqrt(2.0);
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t positive = 0;
    for (int i = 0; i < kDraws; ++i) {
      const double x = draw_weights(3, 0, i, dist, 1)[0];
      sum += x;
      sum_sq += x * x;
      positive += x > 0.0;
    }
    const double mean = sum / kDraws;
    CHECK(std::abs(mean) < 5.0 * sigma / std::sqrt(double(kDraws)));
    CHECK(std::abs(sum_sq / kDraws - sigma * sigma) < 0.01 * sigma * sigma);
    // Binomial(10^6, 1/2) has standard deviation 500.
    CHECK(std::abs(double(positive) - kDraws / 2.0) < 5.0 * 500.0);
  }
}

TEST_CASE("run: n = 1 and n = 2 have one class") {
  const ClassMap one = run(config_for(1, 1000, 4));
  REQUIRE(one.counts.size() == 1);
  CHECK(one.counts.begin()->first == ClassKey{1});
  CHECK(one.counts.begin()->second == 1000);

  const ClassMap two = run(config_for(2, 100000, 4, 3));
  REQUIRE(two.counts.size() == 1);
  CHECK(two.counts.begin()->first == ClassKey{2, 0});
  CHECK(two.rounds == 100000);
}

TEST_CASE("run: n = 3 dictator frequency") {
  constexpr std::uint64_t kRounds = 1'000'000;
  const ClassMap map = run(config_for(3, kRounds, 9, 4));
  REQUIRE(map.counts.size() == 2);
  CHECK(total_count(map) == kRounds);
  // Per-PUF probability 2^-3.2086 times the class size 6.
  const double expected = 6.0 * std::exp2(-3.2086);
  const double sigma = std::sqrt(expected * (1 - expected) / kRounds);
  const double observed = double(map.counts.at(ClassKey{4, 0, 0})) / kRounds;
  CHECK(std::abs(observed - expected) < 3.0 * sigma + 5e-5);
  for (const auto& [key, count] : map.counts) {
    CHECK(is_canonical(key));
    CHECK(satisfies_chow_invariants(key));
  }
}

TEST_CASE("run: determinism across shard and thread layouts") {
  SamplerConfig config = config_for(5, 20000, 77, 8);
  const ClassMap single_thread = run(config, 1);
  const ClassMap four_threads = run(config, 4);
  CHECK(single_thread == four_threads);
  CHECK(single_thread.rounds == 20000);

  std::vector<ClassMap> shards;
  for (std::uint32_t k = 0; k < 8; ++k) shards.push_back(run_shard(config, k));
  CHECK(merge(shards) == single_thread);
}

TEST_CASE("run_poissonized") {
  SamplerConfig config = config_for(3, 1, 5, 4);
  SUBCASE("realized count concentrates") {
    const ClassMap map = run_poissonized(config, 1'000'000);
    REQUIRE(map.poisson_n.has_value());
    CHECK(*map.poisson_n == 1'000'000);
    CHECK(std::abs(double(map.rounds) - 1e6) < 5.0 * 1000.0);
    CHECK(total_count(map) == map.rounds);
  }
  SUBCASE("N = 0 gives an empty map") {
    const ClassMap map = run_poissonized(config, 0);
    CHECK(map.empty());
    CHECK(map.counts.empty());
    CHECK(map.poisson_n == std::optional<std::uint64_t>(0));
  }
  SUBCASE("shards carry their share of N") {
    config.poissonized = true;
    config.rounds = 1001;
    std::uint64_t sum = 0;
    for (std::uint32_t k = 0; k < 4; ++k) sum += *run_shard(config, k).poisson_n;
    CHECK(sum == 1001);
  }
}

TEST_CASE("merge") {
  const ClassMap a = run(config_for(4, 5000, 1));
  const ClassMap b = run(config_for(4, 7000, 2));
  SamplerConfig cfg = config_for(4, 1, 1);
  CHECK(merge(std::vector<ClassMap>{a, empty_map(cfg)}) == a);

  const ClassMap ab = merge(std::vector<ClassMap>{a, b});
  const ClassMap ba = merge(std::vector<ClassMap>{b, a});
  CHECK(ab.counts == ba.counts);
  CHECK(ab.rounds == 12000);
  CHECK(total_count(ab) == 12000);
  CHECK(ab.seed == 0);  // seeds differ

  const ClassMap doubled = merge(std::vector<ClassMap>{a, a});
  for (const auto& [key, count] : a.counts) CHECK(doubled.counts.at(key) == 2 * count);

  const ClassMap other_n = run(config_for(3, 100, 1));
  CHECK_THROWS_AS(merge(std::vector<ClassMap>{a, other_n}), IncompatibleMaps);
  SamplerConfig uniform = config_for(4, 100, 1);
  uniform.distribution = Distribution::uniform;
  CHECK_THROWS_AS(merge(std::vector<ClassMap>{a, run(uniform)}), IncompatibleMaps);
  CHECK_THROWS_AS(merge(std::vector<ClassMap>{a, run_poissonized(cfg, 100)}), IncompatibleMaps);
}

TEST_CASE("coverage at n = 4") {
  const ClassMap map = run(config_for(4, 1'000'000, 12));
  CHECK(covered_pufs(map) == 104);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(validate(config_for(0, 10, 1)), std::invalid_argument);
  CHECK_THROWS_AS(validate(config_for(25, 10, 1)), std::invalid_argument);
  CHECK_THROWS_AS(validate(config_for(3, 0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(validate(config_for(3, 10, 1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(run_shard(config_for(3, 10, 1, 2), 2), std::invalid_argument);
}

TEST_CASE("laplace and uniform models sample valid classes") {
  for (Distribution dist : {Distribution::uniform, Distribution::laplace}) {
    SamplerConfig config = config_for(6, 20000, 3, 2);
    config.distribution = dist;
    const ClassMap map = run(config);
    CHECK_NOTHROW(check_integrity(map));
  }
}
