#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pufent/estimators.hpp"
#include "pufent/sampler.hpp"

namespace pufent {

inline constexpr int kReportFormatVersion = 1;

struct SamplerSummary {
  std::string distribution;
  std::uint64_t seed = 0;
  std::uint32_t shards = 1;
  std::uint64_t rounds = 0;
  std::optional<std::uint64_t> poisson_n;
  std::uint64_t rejected = 0;
  std::size_t inputs = 0;

  friend bool operator==(const SamplerSummary&, const SamplerSummary&) = default;
};

SamplerSummary summarize(const ClassMap& merged, std::size_t inputs);

struct Report {
  int format_version = kReportFormatVersion;
  int n = 1;
  std::vector<EntropyEstimate> estimates;
  SamplerSummary sampler;
  /// ISO-8601 UTC; JSON only.
  std::string generated_at;
};

/// Values are written rounded to six decimals.
std::string report_json(const Report& report);
std::string report_csv(const Report& report);

Report parse_report_json(std::string_view text);
Report parse_report_csv(std::string_view text);

/// Rounds to the printed precision (six decimals).
double round6(double value);

std::string utc_timestamp();

struct Fig1Row {
  int n = 1;
  double h0 = 0.0;
  std::optional<EntropyEstimate> h1;
  std::optional<EntropyEstimate> h2;
  std::optional<EntropyEstimate> hinf;
};

/// One row per distinct n, ascending. Each n's maps are merged for H1 and
/// Hinf; H2 is filled when that n has two or more Poissonized batches. H0
/// comes from the published census.
std::vector<Fig1Row> fig1_rows(std::span<const ClassMap> maps, double confidence = 0.95);

/// CSV `n,H0,H1_lo,H1_hi,H2_lo,H2_hi,Hinf_lo,Hinf_hi`; missing intervals are
/// empty fields.
std::string fig1_csv(std::span<const Fig1Row> rows);

}  // namespace pufent
