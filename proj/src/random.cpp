#include "pufent/random.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pufent {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::string_view to_string(Distribution dist) {
  switch (dist) {
    case Distribution::gaussian: return "gaussian";
    case Distribution::uniform: return "uniform";
    case Distribution::laplace: return "laplace";
  }
  return "unknown";
}

Distribution parse_distribution(std::string_view name) {
  if (name == "gaussian") return Distribution::gaussian;
  if (name == "uniform") return Distribution::uniform;
  if (name == "laplace") return Distribution::laplace;
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t shard, std::uint64_t index) {
  std::uint64_t key = mix64(seed + kGolden);
  key = mix64(key ^ (shard * 0xD1B54A32D192ED03ull + kGolden));
  key = mix64(key ^ (index * 0xAEF17502108EF2D9ull + kGolden));
  key_ = key;
}

CounterStream::result_type CounterStream::operator()() {
  return mix64(key_ + (++counter_) * kGolden);
}

double CounterStream::uniform01() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

void draw_weights(CounterStream& stream, Distribution dist, std::span<double> out) {
  switch (dist) {
    case Distribution::gaussian: {
      // Marsaglia polar method, both variates of each accepted pair used.
      std::size_t i = 0;
      while (i < out.size()) {
        double u, v, s;
        do {
          u = 2.0 * stream.uniform01() - 1.0;
          v = 2.0 * stream.uniform01() - 1.0;
          s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        out[i++] = u * factor;
        if (i < out.size()) out[i++] = v * factor;
      }
      break;
    }
    case Distribution::uniform:
      for (double& x : out) x = 2.0 * stream.uniform01() - 1.0;
      break;
    case Distribution::laplace:
      for (double& x : out) {
        const std::uint64_t bits = stream();
        // Exp(1) from the top 53 bits, sign from the lowest bit.
        const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
        const double magnitude = -std::log1p(-u);
        x = (bits & 1u) != 0 ? -magnitude : magnitude;
      }
      break;
  }
}

}  // namespace pufent
