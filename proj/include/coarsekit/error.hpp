#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coarsekit {

enum class ErrorKind {
  InvalidInput,
  DisconnectedGraph,
  OutOfRange,
  EmptySet,
  FullSet,
  TooLarge,
  UnequalSides,
  NotBipartite,
  EmptyRange,
  DomainMismatch,
  Impossible,
  SizeMismatch,
  PreconditionViolated,
  NotInjective,
  BadLabeling,
  InfeasibleDegree,
  RetriesExhausted,
  NonpositiveH,
  MatchingFailed,
};

std::string_view to_string(ErrorKind kind);

// Every library failure is reported through this type; the kind is what
// callers (and the CLI's structured error object) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace coarsekit
