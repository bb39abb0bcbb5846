#ifndef BOHM1D_CLI_HPP
#define BOHM1D_CLI_HPP

#include <string>
#include <vector>

namespace bohm1d::cli {

// Process exit codes of the batch tool.
inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;  // a consistency check reported failures
inline constexpr int exit_usage = 2;         // bad parameters or domain violations
inline constexpr int exit_io = 3;            // could not read or write a file
inline constexpr int exit_degenerate = 4;    // node, stall, or step-control abort

// Runs the batch tool. The vector form takes the arguments without the
// program name, which makes in-process invocation from tests direct.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

} // namespace bohm1d::cli

#endif
