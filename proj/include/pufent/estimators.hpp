#pragma once

// Renyi entropies (bits) of the PUF distribution from class counts. All PUFs
// of a class are equiprobable, so each estimator works on class frequencies
// and corrects by the exact class size.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "pufent/sampler.hpp"

namespace pufent {

enum class EntropyOrder { h0, h1, h2, hinf };

std::string_view to_string(EntropyOrder order);
/// Accepts "h0", "h1", "h2", "hinf". Throws std::invalid_argument otherwise.
EntropyOrder parse_entropy_order(std::string_view name);

struct EntropyEstimate {
  EntropyOrder order = EntropyOrder::h0;
  double value_bits = 0.0;
  double ci_low_bits = 0.0;
  double ci_high_bits = 0.0;
  double confidence = 0.95;
  std::uint64_t sample_size = 0;
  std::string method;
  std::optional<double> bias_bound_bits;
};

/// Published census of PUFs (self-dual threshold functions) of size n, for
/// n = 1..10; nullopt beyond. These are threshold functions of n - 1
/// variables, counted exhaustively in the literature.
std::optional<std::uint64_t> published_puf_count(int n);

/// Sum of the class sizes of the observed keys.
OrbitCount covered_pufs(const ClassMap& map);

/// Class-support size used by the bias bound and whether it is exact. It is
/// exact when the observed classes cover the published PUF count.
struct SupportSize {
  std::uint64_t classes = 0;
  bool exact = false;
};
SupportSize support_size(const ClassMap& map);

/// log2 of the number of PUFs in observed classes; a lower bound on H0 and
/// exact under full coverage.
EntropyEstimate h0_lower(const ClassMap& map);

/// log2(1 + (m - 1) / N) with m the support size (observed when not given).
double h1_bias_bound(const ClassMap& map, std::optional<std::uint64_t> support = std::nullopt);

/// Plug-in class entropy plus the mean log2 class size. The interval is the
/// Student-t interval of the size term, shifted by the class entropy and
/// widened upward by the bias bound.
EntropyEstimate h1_plugin(const ClassMap& map, double confidence = 0.95);

/// Unbiased power-sum sum_f P(f)^2 from one Poissonized batch:
/// sum_k c_k (c_k - 1) / (|class_k| N^2).
double power_sum_batch(const ClassMap& batch);

/// -log2 of the mean batch power-sum, with a Student-t interval over
/// batches mapped through -log2. Needs at least two batches.
EntropyEstimate h2_unbiased(std::span<const ClassMap> batches, double confidence = 0.95);

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};
/// Wilson score interval for `successes` out of `trials` with quantile z.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

/// Min-entropy from the class with the largest count per member, with the Wilson interval of its
/// frequency mapped through -log2 and shifted by log2 of its size.
EntropyEstimate hinf_wilson(const ClassMap& map, double confidence = 0.95);

/// Hinf <= H2 <= H1 <= n^2 (and H1 <= H0 when present), each comparison
/// allowed the sum of the two interval half-widths as slack. Estimates of
/// other orders are ignored if absent.
bool entropy_ordering_holds(std::span<const EntropyEstimate> estimates, int n);

}  // namespace pufent
