#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gqd::cli {

/// Exit codes.
inline constexpr int exit_pass = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

std::string version();

/// Runs one command line (args excludes the program name). Tables and reports
/// go to `out` unless redirected to files; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gqd::cli
