#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace ecd::cli {

/// Parses arguments (without the program name) into a RunConfig. --config
/// files are expanded first so that explicit flags override them. Throws
/// UsageError on invalid input; returns false when help was printed.
bool parse_arguments(const std::vector<std::string>& args, RunConfig& config, std::ostream& out);

/// Full command-line entry point. Exit codes: 0 success, 1 computation
/// error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecd::cli
