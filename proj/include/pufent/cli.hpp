#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pufent::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kRuntimeError = 1,
  kUsageError = 2,
  kEstimatorPrecondition = 3,
};

/// Runs the `pufent` command line. `args` excludes the program name.
/// Subcommands: sample, merge, estimate, enumerate, report-fig1.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pufent::cli
