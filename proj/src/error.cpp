#include "hdrelay/error.hpp"

#include <algorithm>

namespace hdrelay {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::BadGainVariant: return "BadGainVariant";
    case ErrorKind::SourceEqualsDestination: return "SourceEqualsDestination";
    case ErrorKind::BadNodeIndex: return "BadNodeIndex";
    case ErrorKind::BadWidths: return "BadWidths";
    case ErrorKind::BadSize: return "BadSize";
    case ErrorKind::BadArgument: return "BadArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidSchedule: return "InvalidSchedule";
    case ErrorKind::ModelMismatch: return "ModelMismatch";
    case ErrorKind::ComponentNotCovered: return "ComponentNotCovered";
    case ErrorKind::GroundSetTooLarge: return "GroundSetTooLarge";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::InternalVerificationFailure: return "InternalVerificationFailure";
    case ErrorKind::InconsistentMarginals: return "InconsistentMarginals";
    case ErrorKind::NetworkTooLarge: return "NetworkTooLarge";
    case ErrorKind::GroupingInvalid: return "GroupingInvalid";
    case ErrorKind::NumericalInstability: return "NumericalInstability";
    case ErrorKind::NotLayered: return "NotLayered";
    case ErrorKind::LayerTooThin: return "LayerTooThin";
    case ErrorKind::ZeroFullDuplex: return "ZeroFullDuplex";
  }
  return "Unknown";
}

namespace {

std::string join_messages(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += std::string(to_string(v.kind)) + ": " + v.message;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorKind::BadArgument : violations.front().kind,
            join_messages(violations)),
      violations_(std::move(violations)) {}

bool ValidationError::has(ErrorKind kind) const noexcept {
  return std::any_of(violations_.begin(), violations_.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

}  // namespace hdrelay
