#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace diastasis {

/// Exit codes of cli_dispatch.
enum class ExitCode : int {
    Positive = 0,  ///< ConsistentUpTo, or the checked property holds
    Negative = 1,  ///< NotInduced, or the checked property fails
    Usage = 2,     ///< bad flags or invalid input; no report is written
    Invariant = 3, ///< internal invariant breach
};

/// Runs one subcommand. args excludes the program name. The human table goes
/// to out, diagnostics and timing to err; --json PATH is written only after
/// the command completes.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace diastasis
