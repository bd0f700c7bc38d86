#pragma once

// Everything a run depends on. A RunConfig serializes to key=value lines
// (the same format --config reads), so a saved config reproduces a run.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ecd::cli {

struct RunConfig {
  std::string command;

  // system
  std::string map = "logistic";
  /// Explicit map parameters by name; missing ones take catalog defaults.
  std::map<std::string, double> params;
  std::vector<double> x0;
  std::string orbit_file;
  /// 0 = the single point x0; otherwise a seeded uniform sample of the domain.
  std::size_t ensemble = 0;

  // observation and estimation
  std::string cells = "100";
  bool auto_box = false;
  std::size_t skip = 1000;
  std::size_t n = 100000;
  double epsilon = 1e-6;
  std::string log_base = "e";
  std::uint64_t seed = 20240611;
  std::size_t threads = 0;

  // sweep / bifurcation
  std::string param;
  std::optional<double> from, to, step;
  std::vector<double> values;
  std::size_t keep = 200;

  // lyapunov
  std::size_t reorthonormalize = 1;

  // circle-decay
  std::size_t convergents = 7;
  std::uint64_t min_denominator = 2;
  double theta0 = 0.5;

  // quantum-ecd
  std::string state_file;
  std::string kraus_file;
  std::string channel = "depolarizing";
  double p = 0.5;
  std::size_t dim = 2;
  std::size_t trials = 64;
  std::string pvm = "none";

  // output
  std::string out;
  std::string format = "csv";
  std::string svg;

  bool operator==(const RunConfig&) const = default;
};

/// key=value lines in a fixed key order; unset optionals are omitted.
std::string serialize(const RunConfig& config);

/// Parses key=value text ('#' comments and blank lines allowed) into
/// "--key=value" arguments, in file order. `command` becomes a leading
/// positional. Throws ParseError with the 1-based line on malformed lines.
std::vector<std::string> config_arguments(const std::string& text);

/// Shortest round-trip form used in every emitted number.
std::string format_number(double value);
std::string format_list(const std::vector<double>& values);

/// "a=3.71;b=0.3" in parameter-name order.
std::string format_params(const std::map<std::string, double>& params);

}  // namespace ecd::cli
