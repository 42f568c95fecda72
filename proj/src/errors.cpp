#include "leglab/errors.hpp"

namespace leglab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::RationalReexpansionFailure:
      return "RationalReexpansionFailure";
    case ErrorKind::NonexactForm:
      return "NonexactForm";
    case ErrorKind::CycleThroughPole:
      return "CycleThroughPole";
    case ErrorKind::QuadratureNotConverged:
      return "QuadratureNotConverged";
    case ErrorKind::EvalAtPole:
      return "EvalAtPole";
    case ErrorKind::NoPathFound:
      return "NoPathFound";
    case ErrorKind::MismatchedJets:
      return "MismatchedJets";
    case ErrorKind::InfeasibleConstraints:
      return "InfeasibleConstraints";
    case ErrorKind::BasisTooSmall:
      return "BasisTooSmall";
    case ErrorKind::ConstantDerivative:
      return "ConstantDerivative";
    case ErrorKind::NoValidDelta:
      return "NoValidDelta";
    case ErrorKind::NoSeparation:
      return "NoSeparation";
    case ErrorKind::ConditioningFailure:
      return "ConditioningFailure";
    case ErrorKind::DegenerateDy1:
      return "DegenerateDy1";
    case ErrorKind::DerivativeNotNearIdentity:
      return "DerivativeNotNearIdentity";
    case ErrorKind::SingularSystem:
      return "SingularSystem";
    case ErrorKind::NewtonDiverged:
      return "NewtonDiverged";
    case ErrorKind::ZeroCrossing:
      return "ZeroCrossing";
    case ErrorKind::SearchExhausted:
      return "SearchExhausted";
    case ErrorKind::DegenerateArcIntegral:
      return "DegenerateArcIntegral";
    case ErrorKind::FloorViolated:
      return "FloorViolated";
    case ErrorKind::SectorCoverFailure:
      return "SectorCoverFailure";
    case ErrorKind::BudgetCollapse:
      return "BudgetCollapse";
    case ErrorKind::JunctionMismatch:
      return "JunctionMismatch";
    case ErrorKind::NotProperOnData:
      return "NotProperOnData";
    case ErrorKind::ToleranceNotReached:
      return "ToleranceNotReached";
    case ErrorKind::PreconditionViolation:
      return "PreconditionViolation";
    case ErrorKind::ParseError:
      return "ParseError";
  }
  return "Unknown";
}

}  // namespace leglab
