#pragma once

#include <istream>
#include <ostream>

namespace vpoem::cli {

/// Process exit codes.
enum ExitCode : int { kSuccess = 0, kUsageError = 1, kDataError = 2 };

/// Runs one subcommand: score, classify, filter, stats, synth, evaluate or
/// report. `in`/`out` stand in for stdin/stdout when a file argument is
/// omitted or "-"; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace vpoem::cli
