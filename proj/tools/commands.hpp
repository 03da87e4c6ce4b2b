#ifndef BB84_TOOLS_COMMANDS_HPP
#define BB84_TOOLS_COMMANDS_HPP

#include <iosfwd>

namespace bb84::cli {

enum ExitCode : int {
  kSuccess = 0,
  kIoError = 1,
  kUsageError = 2,
  kVerificationFailed = 3,
};

/// Relative --out paths are resolved against this directory when set.
inline constexpr const char* kOutputDirEnv = "BB84LAB_OUTPUT_DIR";

/// Entry point shared by the bb84lab binary and the tests. Results that are
/// not sent to a file go to `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bb84::cli

#endif  // BB84_TOOLS_COMMANDS_HPP
