#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptscatter::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailure = 1,
    kExitSingular = 2,
    kExitUsage = 64,
};

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics and summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ptscatter::cli
