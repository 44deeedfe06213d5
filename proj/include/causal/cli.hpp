#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace causal::cli {

/// Exit statuses of `run`.
inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 1;
inline constexpr int exit_not_identifiable = 2;

/// Runs the command line front end on `args` (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causal::cli
