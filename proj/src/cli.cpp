#include "pufent/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <thread>

#include <CLI11.hpp>

#include "pufent/estimators.hpp"
#include "pufent/oracle.hpp"
#include "pufent/report.hpp"
#include "pufent/sampler.hpp"
#include "pufent/store.hpp"

namespace pufent::cli {

namespace {

struct SampleOptions {
  int n = 0;
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  std::uint32_t shards = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::uint32_t> shard;
  unsigned threads = 0;
  std::string dist = "gaussian";
  bool poisson = false;
  std::string output;
};

struct EstimateOptions {
  std::string entropy = "all";
  double confidence = 0.95;
  std::vector<std::string> inputs;
  std::string format = "json";
};

struct EnumerateOptions {
  int n = 0;
  std::string output;
};

struct MergeOptions {
  std::vector<std::string> inputs;
  std::string output;
};

struct Fig1Options {
  std::vector<std::string> inputs;
  std::string format = "csv";
  double confidence = 0.95;
};

std::vector<ClassMap> load_all(const std::vector<std::string>& paths) {
  std::vector<ClassMap> maps;
  maps.reserve(paths.size());
  for (const auto& path : paths) maps.push_back(load(path));
  return maps;
}

bool valid_confidence(double c) { return c > 0.0 && c < 1.0; }

int cmd_sample(const SampleOptions& opt, std::ostream& out, std::ostream& err) {
  SamplerConfig config;
  config.n = opt.n;
  config.rounds = opt.rounds;
  config.seed = opt.seed;
  config.shards = opt.shards;
  config.poissonized = opt.poisson;
  try {
    config.distribution = parse_distribution(opt.dist);
    validate(config);
    if (!opt.poisson && opt.rounds == 0) throw std::invalid_argument("rounds must be at least 1");
    if (opt.shard && *opt.shard >= opt.shards) throw std::invalid_argument("--shard must be below --shards");
  } catch (const std::invalid_argument& e) {
    err << "sample: " << e.what() << '\n';
    return kUsageError;
  }
  const ClassMap map = opt.shard ? run_shard(config, *opt.shard) : run(config, opt.threads);
  save(map, opt.output);
  out << map.counts.size() << " classes, " << map.rounds << " samples, " << map.rejected
      << " rejected\n";
  return kOk;
}

int cmd_merge(const MergeOptions& opt, std::ostream& out) {
  std::vector<std::filesystem::path> paths(opt.inputs.begin(), opt.inputs.end());
  merge_files(paths, opt.output);
  out << "merged " << paths.size() << " files into " << opt.output << '\n';
  return kOk;
}

int cmd_estimate(const EstimateOptions& opt, std::ostream& out, std::ostream& err) {
  if (!valid_confidence(opt.confidence)) {
    err << "estimate: --confidence must lie in (0, 1)\n";
    return kUsageError;
  }
  if (opt.format != "json" && opt.format != "csv") {
    err << "estimate: --format must be json or csv\n";
    return kUsageError;
  }
  std::vector<EntropyOrder> orders;
  try {
    if (opt.entropy == "all") {
      orders = {EntropyOrder::h0, EntropyOrder::h1, EntropyOrder::h2, EntropyOrder::hinf};
    } else {
      std::size_t start = 0;
      while (start <= opt.entropy.size()) {
        const std::size_t end = std::min(opt.entropy.find(',', start), opt.entropy.size());
        orders.push_back(parse_entropy_order(opt.entropy.substr(start, end - start)));
        start = end + 1;
      }
    }
  } catch (const std::invalid_argument& e) {
    err << "estimate: " << e.what() << '\n';
    return kUsageError;
  }

  const std::vector<ClassMap> maps = load_all(opt.inputs);
  const bool wants_h2 = std::find(orders.begin(), orders.end(), EntropyOrder::h2) != orders.end();
  if (wants_h2) {
    const bool batches = maps.size() >= 2 &&
                         std::all_of(maps.begin(), maps.end(),
                                     [](const ClassMap& m) { return m.poisson_n.has_value(); });
    if (!batches) {
      err << "estimate: H2 needs at least two Poissonized input maps (batches)\n";
      return kEstimatorPrecondition;
    }
  }
  const ClassMap merged = merge(maps);

  Report report;
  report.n = merged.n;
  report.sampler = summarize(merged, maps.size());
  report.generated_at = utc_timestamp();
  for (EntropyOrder order : orders) {
    switch (order) {
      case EntropyOrder::h0: report.estimates.push_back(h0_lower(merged)); break;
      case EntropyOrder::h1: report.estimates.push_back(h1_plugin(merged, opt.confidence)); break;
      case EntropyOrder::h2: report.estimates.push_back(h2_unbiased(maps, opt.confidence)); break;
      case EntropyOrder::hinf: report.estimates.push_back(hinf_wilson(merged, opt.confidence)); break;
    }
  }
  out << (opt.format == "json" ? report_json(report) : report_csv(report));
  return kOk;
}

int cmd_enumerate(const EnumerateOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.n < 1 || opt.n > kMaxCensusN) {
    err << "enumerate: --n must be in [1, " << kMaxCensusN << "]\n";
    return kUsageError;
  }
  const std::vector<CensusEntry> census = enumerate_pufs(opt.n);
  const ClassMap map = census_map(opt.n, census);
  if (!opt.output.empty()) save(map, opt.output);
  char h0[32];
  std::snprintf(h0, sizeof h0, "%.4f", std::log2(static_cast<double>(map.rounds)));
  out << map.rounds << "  " << h0 << '\n';
  return kOk;
}

int cmd_report_fig1(const Fig1Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.inputs.empty()) {
    err << "report-fig1: no inputs given\n";
    return kRuntimeError;
  }
  if (opt.format != "csv") {
    err << "report-fig1: only --format csv is supported\n";
    return kUsageError;
  }
  if (!valid_confidence(opt.confidence)) {
    err << "report-fig1: --confidence must lie in (0, 1)\n";
    return kUsageError;
  }
  const std::vector<ClassMap> maps = load_all(opt.inputs);
  const std::vector<Fig1Row> rows = fig1_rows(maps, opt.confidence);
  out << fig1_csv(rows);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delay-PUF distribution and entropy estimation", "pufent"};
  app.require_subcommand(1);

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Monte-Carlo sampling into a class map file");
  sample_cmd->add_option("--n", sample.n, "PUF size")->required();
  sample_cmd->add_option("--rounds", sample.rounds, "Samples, or the Poisson parameter with --poisson")
      ->required();
  sample_cmd->add_option("--seed", sample.seed, "Random seed")->required();
  sample_cmd->add_option("--shards", sample.shards, "Independent random streams");
  sample_cmd->add_option("--shard", sample.shard, "Sample only this shard index");
  sample_cmd->add_option("--threads", sample.threads, "Worker threads (0 = all cores)");
  sample_cmd->add_option("--dist", sample.dist, "gaussian | uniform | laplace");
  sample_cmd->add_flag("--poisson", sample.poisson, "Draw the sample count from Poisson(rounds)");
  sample_cmd->add_option("-o,--output", sample.output, "Output class map file")->required();

  MergeOptions merge_opt;
  auto* merge_cmd = app.add_subcommand("merge", "Merge class map files");
  merge_cmd->add_option("-i,--inputs", merge_opt.inputs, "Input files")->required()->delimiter(',');
  merge_cmd->add_option("-o,--output", merge_opt.output, "Output file")->required();

  EstimateOptions estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "Entropy report from class map files");
  estimate_cmd->add_option("--entropy", estimate.entropy, "h0 | h1 | h2 | hinf | all");
  estimate_cmd->add_option("--confidence", estimate.confidence, "Confidence level in (0, 1)");
  estimate_cmd->add_option("-i,--inputs", estimate.inputs, "Input files (batches for H2)")
      ->required()
      ->delimiter(',');
  estimate_cmd->add_option("--format", estimate.format, "json | csv");

  EnumerateOptions enumerate;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "Exact census of all PUFs, n <= 5");
  enumerate_cmd->add_option("--n", enumerate.n, "PUF size")->required();
  enumerate_cmd->add_option("-o,--output", enumerate.output, "Census file");

  Fig1Options fig1;
  auto* fig1_cmd = app.add_subcommand("report-fig1", "Per-n entropy intervals as CSV");
  fig1_cmd->add_option("--inputs", fig1.inputs, "Class map files, any mix of n")->delimiter(',');
  fig1_cmd->add_option("--format", fig1.format, "csv");
  fig1_cmd->add_option("--confidence", fig1.confidence, "Confidence level in (0, 1)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "pufent: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (sample_cmd->parsed()) return cmd_sample(sample, out, err);
    if (merge_cmd->parsed()) return cmd_merge(merge_opt, out);
    if (estimate_cmd->parsed()) return cmd_estimate(estimate, out, err);
    if (enumerate_cmd->parsed()) return cmd_enumerate(enumerate, out, err);
    if (fig1_cmd->parsed()) return cmd_report_fig1(fig1, out, err);
  } catch (const UndefinedEstimate& e) {
    err << "pufent: " << e.what() << '\n';
    return kEstimatorPrecondition;
  } catch (const NonPoissonizedInput& e) {
    err << "pufent: " << e.what() << '\n';
    return kEstimatorPrecondition;
  } catch (const EmptyMap& e) {
    err << "pufent: " << e.what() << '\n';
    return kEstimatorPrecondition;
  } catch (const std::exception& e) {
    err << "pufent: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace pufent::cli
