#include "ecd/error.hpp"

#include <sstream>

namespace ecd {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DomainEscape: return "DomainEscape";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::UnknownMap: return "UnknownMap";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::EmptyAxis: return "EmptyAxis";
    case ErrorCode::OutOfBox: return "OutOfBox";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::InconsistentModel: return "InconsistentModel";
    case ErrorCode::MarginalMismatch: return "MarginalMismatch";
    case ErrorCode::IncompatiblePartition: return "IncompatiblePartition";
    case ErrorCode::IncompatibleObservation: return "IncompatibleObservation";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidChannel: return "InvalidChannel";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {

std::string describe_escape(std::size_t step, const std::vector<double>& point,
                            const std::string& context) {
  std::ostringstream out;
  out.precision(17);
  out << "orbit left the domain at step " << step << ", point (";
  for (std::size_t i = 0; i < point.size(); ++i) {
    out << (i ? ", " : "") << point[i];
  }
  out << ")";
  if (!context.empty()) out << " [" << context << "]";
  return out.str();
}

}  // namespace

DomainEscapeError::DomainEscapeError(std::size_t step, std::vector<double> point,
                                     std::string context)
    : Error(ErrorCode::DomainEscape, describe_escape(step, point, context)),
      step_(step),
      point_(std::move(point)) {}

OutOfBoxError::OutOfBoxError(std::size_t index, const std::string& detail)
    : Error(ErrorCode::OutOfBox, "point " + std::to_string(index) + " " + detail), index_(index) {}

ParseError::ParseError(std::size_t line, const std::string& detail)
    : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + detail), line_(line) {}

}  // namespace ecd
