#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ecd {

enum class ErrorCode {
  DomainEscape,
  NonFinite,
  UnknownMap,
  ParamOutOfRange,
  EmptyAxis,
  OutOfBox,
  InvalidDistribution,
  InconsistentModel,
  MarginalMismatch,
  IncompatiblePartition,
  IncompatibleObservation,
  EmptyInput,
  PrecisionExhausted,
  DimensionMismatch,
  InvalidState,
  InvalidChannel,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base of every error thrown by the library. The message is a single line
/// suitable for a CLI diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// An orbit left the map's domain box at the given step.
class DomainEscapeError : public Error {
 public:
  DomainEscapeError(std::size_t step, std::vector<double> point, std::string context = {});

  std::size_t step() const noexcept { return step_; }
  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::size_t step_;
  std::vector<double> point_;
};

class OutOfBoxError : public Error {
 public:
  OutOfBoxError(std::size_t index, const std::string& detail);

  /// Index of the offending point within the orbit (or 0 for a lone point).
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& detail);

  /// 1-based line number in the input file.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ecd
