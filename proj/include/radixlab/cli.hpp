#pragma once

#include <ostream>

namespace radixlab::cli {

/// Exit codes of the radixlab executable.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kDomainError = 2,
    kVerificationFailure = 3,
};

/// Runs the command line; diagnostics go to `err` as a single line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace radixlab::cli
