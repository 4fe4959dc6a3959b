#include "pufent/estimators.hpp"

#include <array>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace pufent {

namespace {

// Total PUF counts for n = 1..10 (threshold functions of n - 1 variables).
// Values up to n = 5 are re-derived by the census in oracle.cpp.
constexpr std::array<std::uint64_t, 10> kPublishedPufCounts = {
    2ull,           4ull,           14ull,          104ull,
    1882ull,        94572ull,       15028134ull,    8378070864ull,
    17561539552946ull, 144130531453121108ull,
};

void check_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
}

double student_quantile(double confidence, double dof) {
  const boost::math::students_t dist(dof);
  return boost::math::quantile(dist, 0.5 + confidence / 2.0);
}

double normal_quantile(double confidence) {
  const boost::math::normal dist;
  return boost::math::quantile(dist, 0.5 + confidence / 2.0);
}

double log2_size(const ClassKey& key) { return std::log2(to_double(orbit_size(key))); }

double max_entropy(int n) { return static_cast<double>(n) * n; }

}  // namespace

std::string_view to_string(EntropyOrder order) {
  switch (order) {
    case EntropyOrder::h0: return "h0";
    case EntropyOrder::h1: return "h1";
    case EntropyOrder::h2: return "h2";
    case EntropyOrder::hinf: return "hinf";
  }
  return "unknown";
}

EntropyOrder parse_entropy_order(std::string_view name) {
  if (name == "h0") return EntropyOrder::h0;
  if (name == "h1") return EntropyOrder::h1;
  if (name == "h2") return EntropyOrder::h2;
  if (name == "hinf") return EntropyOrder::hinf;
  throw std::invalid_argument("unknown entropy order '" + std::string(name) + "'");
}

std::optional<std::uint64_t> published_puf_count(int n) {
  if (n < 1 || n > static_cast<int>(kPublishedPufCounts.size())) return std::nullopt;
  return kPublishedPufCounts[n - 1];
}

OrbitCount covered_pufs(const ClassMap& map) {
  OrbitCount total = 0;
  for (const auto& [key, count] : map.counts) total += orbit_size(key);
  return total;
}

SupportSize support_size(const ClassMap& map) {
  SupportSize support{map.counts.size(), false};
  if (auto known = published_puf_count(map.n)) {
    support.exact = covered_pufs(map) == OrbitCount{*known};
  }
  return support;
}

EntropyEstimate h0_lower(const ClassMap& map) {
  if (map.empty()) throw EmptyMap();
  EntropyEstimate est;
  est.order = EntropyOrder::h0;
  est.value_bits = std::log2(to_double(covered_pufs(map)));
  est.ci_low_bits = est.value_bits;
  est.ci_high_bits = std::max(est.value_bits, max_entropy(map.n));
  est.confidence = 1.0;
  est.sample_size = map.rounds;
  est.method = support_size(map).exact ? "coverage(complete)" : "coverage(lower-bound)";
  return est;
}

double h1_bias_bound(const ClassMap& map, std::optional<std::uint64_t> support) {
  if (map.empty()) throw EmptyMap();
  const double m = static_cast<double>(support.value_or(map.counts.size()));
  return std::log2(1.0 + (m - 1.0) / static_cast<double>(map.rounds));
}

EntropyEstimate h1_plugin(const ClassMap& map, double confidence) {
  check_confidence(confidence);
  if (map.empty()) throw EmptyMap();
  if (map.rounds < 2) throw UndefinedEstimate("H1 needs at least two samples");

  const double total = static_cast<double>(map.rounds);
  double class_entropy = 0.0;
  double size_mean = 0.0;
  std::vector<std::pair<double, double>> terms;  // (count, log2 size)
  terms.reserve(map.counts.size());
  for (const auto& [key, count] : map.counts) {
    const double q = static_cast<double>(count) / total;
    const double log_size = log2_size(key);
    class_entropy -= q * std::log2(q);
    size_mean += q * log_size;
    terms.emplace_back(static_cast<double>(count), log_size);
  }
  // Sample variance of log2(size) over the individual samples.
  double sum_sq = 0.0;
  for (const auto& [count, log_size] : terms) {
    sum_sq += count * (log_size - size_mean) * (log_size - size_mean);
  }
  const double std_error = std::sqrt(sum_sq / (total - 1.0) / total);
  const double half_width = student_quantile(confidence, total - 1.0) * std_error;

  const SupportSize support = support_size(map);
  const double bias = h1_bias_bound(map, support.classes);

  EntropyEstimate est;
  est.order = EntropyOrder::h1;
  est.value_bits = class_entropy + size_mean;
  est.ci_low_bits = est.value_bits - half_width;
  est.ci_high_bits = est.value_bits + half_width + bias;
  est.confidence = confidence;
  est.sample_size = map.rounds;
  est.bias_bound_bits = bias;
  est.method = std::string("plugin+t-size-term+bias-bound(m=") +
               std::to_string(support.classes) + (support.exact ? " exact)" : " observed lower-bound)");
  return est;
}

double power_sum_batch(const ClassMap& batch) {
  if (!batch.poisson_n) throw NonPoissonizedInput("batch has no Poisson parameter");
  if (*batch.poisson_n == 0) throw EmptyMap();
  const double big_n = static_cast<double>(*batch.poisson_n);
  double sum = 0.0;
  for (const auto& [key, count] : batch.counts) {
    const double c = static_cast<double>(count);
    sum += c * (c - 1.0) / to_double(orbit_size(key));
  }
  return sum / (big_n * big_n);
}

EntropyEstimate h2_unbiased(std::span<const ClassMap> batches, double confidence) {
  check_confidence(confidence);
  if (batches.empty()) throw EmptyMap();
  for (const ClassMap& batch : batches) {
    if (!batch.poisson_n) throw NonPoissonizedInput("H2 needs Poissonized batches");
    if (batch.n != batches.front().n) throw IncompatibleMaps("batches differ in n");
    if (batch.distribution != batches.front().distribution) {
      throw IncompatibleMaps("batches differ in weight distribution");
    }
  }
  if (batches.size() < 2) throw UndefinedEstimate("H2 needs at least two batches");

  std::vector<double> values;
  std::uint64_t samples = 0;
  for (const ClassMap& batch : batches) {
    values.push_back(power_sum_batch(batch));
    samples += batch.rounds;
  }
  const double b = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= b;
  double sum_sq = 0.0;
  for (double v : values) sum_sq += (v - mean) * (v - mean);
  const double std_error = std::sqrt(sum_sq / (b - 1.0) / b);
  const double half_width = student_quantile(confidence, b - 1.0) * std_error;

  if (!(mean > 0.0)) {
    throw UndefinedEstimate("mean power-sum is not positive; batches are too small");
  }
  const int n = batches.front().n;
  const double low_sum = mean - half_width;
  const double high_sum = mean + half_width;

  EntropyEstimate est;
  est.order = EntropyOrder::h2;
  est.value_bits = -std::log2(mean);
  // -log2 is decreasing: the upper power-sum bound gives the lower entropy.
  est.ci_low_bits = -std::log2(high_sum);
  est.ci_high_bits = low_sum > 0.0 ? std::min(-std::log2(low_sum), max_entropy(n)) : max_entropy(n);
  est.ci_high_bits = std::max(est.ci_high_bits, est.value_bits);
  est.confidence = confidence;
  est.sample_size = samples;
  est.method = "poissonized-power-sum+t-over-" + std::to_string(values.size()) + "-batches";
  return est;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw EmptyMap();
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

EntropyEstimate hinf_wilson(const ClassMap& map, double confidence) {
  check_confidence(confidence);
  if (map.empty()) throw EmptyMap();

  // The most probable PUF lives in the class with the largest count per
  // member, not the largest total count. Ties resolve to the first key in
  // descending order, i.e. the dictator.
  auto best = map.counts.begin();
  double best_log_rate = std::log2(static_cast<double>(best->second)) - log2_size(best->first);
  for (auto it = std::next(map.counts.begin()); it != map.counts.end(); ++it) {
    const double log_rate = std::log2(static_cast<double>(it->second)) - log2_size(it->first);
    if (log_rate > best_log_rate) {
      best = it;
      best_log_rate = log_rate;
    }
  }
  const double log_size = log2_size(best->first);
  const WilsonInterval interval =
      wilson_interval(best->second, map.rounds, normal_quantile(confidence));

  EntropyEstimate est;
  est.order = EntropyOrder::hinf;
  est.value_bits =
      -std::log2(static_cast<double>(best->second) / static_cast<double>(map.rounds)) + log_size;
  est.ci_low_bits = -std::log2(interval.high) + log_size;
  est.ci_high_bits = -std::log2(interval.low) + log_size;
  est.confidence = confidence;
  est.sample_size = map.rounds;

  const ClassKey dictator = dictator_key(map.n);
  if (best->first == dictator) {
    est.method = "wilson(most-probable=dictator)";
  } else {
    std::string key_text;
    for (std::int64_t x : best->first) key_text += (key_text.empty() ? "" : " ") + std::to_string(x);
    est.method = "wilson(most-probable=[" + key_text + "] not dictator";
    if (auto it = map.counts.find(dictator); it != map.counts.end()) {
      const double dictator_bits =
          -std::log2(static_cast<double>(it->second) / static_cast<double>(map.rounds)) +
          std::log2(to_double(orbit_size(dictator)));
      est.method += "; dictator " + std::to_string(dictator_bits) + " bits";
    }
    est.method += ")";
  }
  return est;
}

bool entropy_ordering_holds(std::span<const EntropyEstimate> estimates, int n) {
  const EntropyEstimate* by_order[4] = {nullptr, nullptr, nullptr, nullptr};
  for (const EntropyEstimate& est : estimates) {
    by_order[static_cast<int>(est.order)] = &est;
  }
  auto half_width = [](const EntropyEstimate& e) { return (e.ci_high_bits - e.ci_low_bits) / 2.0; };
  auto not_above = [&](const EntropyEstimate* lo, const EntropyEstimate* hi) {
    if (lo == nullptr || hi == nullptr) return true;
    return lo->value_bits <= hi->value_bits + half_width(*lo) + half_width(*hi);
  };
  const EntropyEstimate* h0 = by_order[0];
  const EntropyEstimate* h1 = by_order[1];
  const EntropyEstimate* h2 = by_order[2];
  const EntropyEstimate* hinf = by_order[3];

  bool ok = not_above(hinf, h2) && not_above(h2, h1) && not_above(hinf, h1);
  // A coverage lower bound on H0 says nothing about H1; only its upper end
  // applies. H0's interval is one-sided, so only H1's half-width counts.
  if (h0 != nullptr && h1 != nullptr) {
    const double ceiling = h0->method == "coverage(lower-bound)" ? h0->ci_high_bits : h0->value_bits;
    ok = ok && h1->value_bits <= ceiling + half_width(*h1);
  }
  for (const EntropyEstimate& est : estimates) {
    ok = ok && est.value_bits >= 0.0 && est.value_bits <= max_entropy(n) + 1e-12;
  }
  return ok;
}

}  // namespace pufent
