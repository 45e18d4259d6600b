#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ocl::cli {

/// Exit codes of the `ocl` tool.
inline constexpr int exit_ok = 0;
inline constexpr int exit_selftest_failed = 1;
inline constexpr int exit_usage = 2;

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out` unless --out names a file; diagnostics go to `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// "a:b:n" (n geometric points from a to b) or a comma-separated list.
std::vector<double> parse_rho_grid(const std::string& text);
/// Comma-separated list; "inf" allowed.
std::vector<double> parse_real_list(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);

}  // namespace ocl::cli
