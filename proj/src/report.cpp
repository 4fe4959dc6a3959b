#include "pufent/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

namespace pufent {

namespace {

using nlohmann::json;

std::string fixed6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t end = std::min(line.find(',', start), line.size());
    fields.emplace_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

}  // namespace

double round6(double value) { return std::round(value * 1e6) / 1e6; }

std::string utc_timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

SamplerSummary summarize(const ClassMap& merged, std::size_t inputs) {
  SamplerSummary s;
  s.distribution = merged.distribution ? std::string(to_string(*merged.distribution)) : "none";
  s.seed = merged.seed;
  s.shards = merged.shards;
  s.rounds = merged.rounds;
  s.poisson_n = merged.poisson_n;
  s.rejected = merged.rejected;
  s.inputs = inputs;
  return s;
}

std::string report_json(const Report& report) {
  json estimates = json::array();
  for (const EntropyEstimate& e : report.estimates) {
    estimates.push_back({
        {"order", std::string(to_string(e.order))},
        {"value_bits", round6(e.value_bits)},
        {"ci_low_bits", round6(e.ci_low_bits)},
        {"ci_high_bits", round6(e.ci_high_bits)},
        {"confidence", round6(e.confidence)},
        {"sample_size", e.sample_size},
        {"method", e.method},
        {"bias_bound_bits", e.bias_bound_bits ? json(round6(*e.bias_bound_bits)) : json(nullptr)},
    });
  }
  const SamplerSummary& s = report.sampler;
  json doc = {
      {"format", "pufreport"},
      {"format_version", report.format_version},
      {"n", report.n},
      {"generated_at", report.generated_at},
      {"sampler",
       {{"distribution", s.distribution},
        {"seed", s.seed},
        {"shards", s.shards},
        {"rounds", s.rounds},
        {"poisson_n", s.poisson_n ? json(*s.poisson_n) : json(nullptr)},
        {"rejected", s.rejected},
        {"inputs", s.inputs}}},
      {"estimates", estimates},
  };
  return doc.dump(2) + "\n";
}

Report parse_report_json(std::string_view text) {
  const json doc = json::parse(text);
  Report report;
  report.format_version = doc.at("format_version").get<int>();
  report.n = doc.at("n").get<int>();
  report.generated_at = doc.at("generated_at").get<std::string>();
  const json& s = doc.at("sampler");
  report.sampler.distribution = s.at("distribution").get<std::string>();
  report.sampler.seed = s.at("seed").get<std::uint64_t>();
  report.sampler.shards = s.at("shards").get<std::uint32_t>();
  report.sampler.rounds = s.at("rounds").get<std::uint64_t>();
  if (!s.at("poisson_n").is_null()) report.sampler.poisson_n = s.at("poisson_n").get<std::uint64_t>();
  report.sampler.rejected = s.at("rejected").get<std::uint64_t>();
  report.sampler.inputs = s.at("inputs").get<std::size_t>();
  for (const json& e : doc.at("estimates")) {
    EntropyEstimate est;
    est.order = parse_entropy_order(e.at("order").get<std::string>());
    est.value_bits = e.at("value_bits").get<double>();
    est.ci_low_bits = e.at("ci_low_bits").get<double>();
    est.ci_high_bits = e.at("ci_high_bits").get<double>();
    est.confidence = e.at("confidence").get<double>();
    est.sample_size = e.at("sample_size").get<std::uint64_t>();
    est.method = e.at("method").get<std::string>();
    if (!e.at("bias_bound_bits").is_null()) est.bias_bound_bits = e.at("bias_bound_bits").get<double>();
    report.estimates.push_back(std::move(est));
  }
  return report;
}

std::string report_csv(const Report& report) {
  std::ostringstream out;
  out << "#pufreport v" << report.format_version << '\n';
  out << "n,order,value_bits,ci_low_bits,ci_high_bits,confidence,sample_size,bias_bound_bits,method\n";
  for (const EntropyEstimate& e : report.estimates) {
    out << report.n << ',' << to_string(e.order) << ',' << fixed6(e.value_bits) << ','
        << fixed6(e.ci_low_bits) << ',' << fixed6(e.ci_high_bits) << ',' << fixed6(e.confidence)
        << ',' << e.sample_size << ',' << (e.bias_bound_bits ? fixed6(*e.bias_bound_bits) : "")
        << ',' << e.method << '\n';
  }
  return out.str();
}

Report parse_report_csv(std::string_view text) {
  Report report;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#pufreport v")) {
    throw std::invalid_argument("not a report CSV");
  }
  report.format_version = std::stoi(line.substr(12));
  std::getline(in, line);  // column names
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 9) throw std::invalid_argument("report row must have 9 fields");
    report.n = std::stoi(fields[0]);
    EntropyEstimate est;
    est.order = parse_entropy_order(fields[1]);
    est.value_bits = std::stod(fields[2]);
    est.ci_low_bits = std::stod(fields[3]);
    est.ci_high_bits = std::stod(fields[4]);
    est.confidence = std::stod(fields[5]);
    est.sample_size = std::stoull(fields[6]);
    if (!fields[7].empty()) est.bias_bound_bits = std::stod(fields[7]);
    est.method = fields[8];
    report.estimates.push_back(std::move(est));
  }
  return report;
}

std::vector<Fig1Row> fig1_rows(std::span<const ClassMap> maps, double confidence) {
  std::map<int, std::vector<ClassMap>> by_n;
  for (const ClassMap& map : maps) by_n[map.n].push_back(map);

  std::vector<Fig1Row> rows;
  for (auto& [n, group] : by_n) {
    Fig1Row row;
    row.n = n;
    if (auto count = published_puf_count(n)) {
      row.h0 = std::log2(static_cast<double>(*count));
    } else {
      row.h0 = h0_lower(merge(group)).value_bits;
    }
    std::vector<ClassMap> batches;
    for (const ClassMap& map : group) {
      if (map.poisson_n) batches.push_back(map);
    }
    if (batches.size() >= 2) row.h2 = h2_unbiased(batches, confidence);
    // Poissonized and fixed-size maps do not merge; in a mixed group the
    // fixed-size maps feed H1 and Hinf.
    std::vector<ClassMap> fixed;
    for (const ClassMap& map : group) {
      if (!map.poisson_n) fixed.push_back(map);
    }
    const ClassMap merged = merge(fixed.empty() ? group : fixed);
    if (merged.rounds >= 2) {
      row.h1 = h1_plugin(merged, confidence);
      row.hinf = hinf_wilson(merged, confidence);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string fig1_csv(std::span<const Fig1Row> rows) {
  std::ostringstream out;
  out << "n,H0,H1_lo,H1_hi,H2_lo,H2_hi,Hinf_lo,Hinf_hi\n";
  auto interval = [&](const std::optional<EntropyEstimate>& e) {
    if (e) {
      out << ',' << fixed6(e->ci_low_bits) << ',' << fixed6(e->ci_high_bits);
    } else {
      out << ",,";
    }
  };
  for (const Fig1Row& row : rows) {
    out << row.n << ',' << fixed6(row.h0);
    interval(row.h1);
    interval(row.h2);
    interval(row.hinf);
    out << '\n';
  }
  return out.str();
}

}  // namespace pufent
