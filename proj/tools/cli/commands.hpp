#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "run_config.hpp"

namespace ecd::cli {

/// Invalid or inconsistent command-line input (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs config.command. Results go to config.out (or `out` when empty);
/// warnings go to `err`. Returns the exit code for completed runs and
/// throws UsageError or ecd::Error otherwise.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ecd::cli
