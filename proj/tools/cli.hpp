#ifndef SPLINEGEN_TOOLS_CLI_HPP
#define SPLINEGEN_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace splinegen::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kPass = 0, kStudyFailed = 1, kUsage = 2 };

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace splinegen::cli

#endif  // SPLINEGEN_TOOLS_CLI_HPP
