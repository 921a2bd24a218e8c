#pragma once

namespace mms::cli {

enum ExitCode : int { Success = 0, CheckFailed = 1, UsageError = 2 };

/// Runs one subcommand (criteria, modulus, counterexample, polar-verify,
/// chain-check, experiment, generate) and returns the process exit code.
int dispatch(int argc, const char* const* argv);

}  // namespace mms::cli
