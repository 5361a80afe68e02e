#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tmx {

enum ExitCode : int { kExitPass = 0, kExitVerificationFailure = 1, kExitUsage = 2 };

/// Runs the `tmx` command line. `args` excludes the program name.
/// Subcommands: coeff, sample, sweep, verify-identities, verify-orthogonality, energy.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tmx
