#pragma once
// Command-line front end. Exit codes: 0 ok, 1 config error, 2 infeasible or
// unreachable, 3 numerical failure.
#include <iosfwd>
#include <string>
#include <vector>

namespace llc::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kInfeasible = 2, kNumericalFailure = 3 };

/// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace llc::cli
