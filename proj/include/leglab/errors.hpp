#pragma once

#include <stdexcept>
#include <string>

namespace leglab {

enum class ErrorKind {
  RationalReexpansionFailure,
  NonexactForm,
  CycleThroughPole,
  QuadratureNotConverged,
  EvalAtPole,
  NoPathFound,
  MismatchedJets,
  InfeasibleConstraints,
  BasisTooSmall,
  ConstantDerivative,
  NoValidDelta,
  NoSeparation,
  ConditioningFailure,
  DegenerateDy1,
  DerivativeNotNearIdentity,
  SingularSystem,
  NewtonDiverged,
  ZeroCrossing,
  SearchExhausted,
  DegenerateArcIntegral,
  FloorViolated,
  SectorCoverFailure,
  BudgetCollapse,
  JunctionMismatch,
  NotProperOnData,
  ToleranceNotReached,
  PreconditionViolation,
  ParseError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::PreconditionViolation, what);
}

}  // namespace leglab
