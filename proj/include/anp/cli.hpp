#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anp {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitConsistency = 1,  // strict consistency failure, or validation violations
  kExitInput = 2,
  kExitConvergence = 3,
  kExitIntegrity = 4,
  kExitInterrupted = 130,
};

/// Runs one invocation. `args` excludes the program name. `color` enables
/// ANSI styling of verdicts.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err, bool color = false);

/// Async-signal-safe; makes a running wizard save and stop.
void request_interrupt() noexcept;
void clear_interrupt() noexcept;
bool interrupt_requested() noexcept;

}  // namespace anp
