#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace wxspeed::cli {

/// Process exit statuses. Each failure family has its own code.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIoFailure = 2,
  kMalformedInput = 3,
  kDuplicateId = 4,
  kUnknownLinkId = 5,
  kInsufficientData = 6,
  kInvalidModel = 7,
  kInvalidArgument = 8,
  kDegenerateVariance = 9,
  kUndefinedPercentage = 10,
  kInternal = 70,
};

/**
 * @brief Runs one subcommand. `args` excludes the program name.
 *
 * Subcommands: ingest-filter, pair, fit-mars, fit-threshold, globalize, evaluate, correct, synth,
 * stats. A path of "-" (or an omitted --out) means standard input/output. Files are written to a
 * temporary sibling and renamed into place.
 */
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace wxspeed::cli
