#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hdrelay {

enum class ErrorKind {
  SelfLoop,
  DuplicateEdge,
  BadGainVariant,
  SourceEqualsDestination,
  BadNodeIndex,
  BadWidths,
  BadSize,
  BadArgument,
  ParseError,
  InvalidSchedule,
  ModelMismatch,
  ComponentNotCovered,
  GroundSetTooLarge,
  ConvergenceFailure,
  InternalVerificationFailure,
  InconsistentMarginals,
  NetworkTooLarge,
  GroupingInvalid,
  NumericalInstability,
  NotLayered,
  LayerTooThin,
  ZeroFullDuplex,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct Violation {
  ErrorKind kind;
  std::string message;
};

// Raised by validating constructors; carries every violation found, not only
// the first. kind() reports the first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept { return violations_; }
  bool has(ErrorKind kind) const noexcept;

 private:
  std::vector<Violation> violations_;
};

}  // namespace hdrelay
