#include "dcone/error.hpp"

namespace dcone {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OddN: return "OddN";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::IncompatibleGrids: return "IncompatibleGrids";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateLambda: return "DegenerateLambda";
    case ErrorCode::EmptyActiveSet: return "EmptyActiveSet";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::BranchMismatch: return "BranchMismatch";
    case ErrorCode::PoleAtZ: return "PoleAtZ";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::AlphaExcluded: return "AlphaExcluded";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::Overlap: return "Overlap";
    case ErrorCode::ObstacleViolated: return "ObstacleViolated";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NonPeriodicV: return "NonPeriodicV";
    case ErrorCode::NoInteriorSupport: return "NoInteriorSupport";
    case ErrorCode::NewtonStall: return "NewtonStall";
    case ErrorCode::ChartDegenerate: return "ChartDegenerate";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace dcone
