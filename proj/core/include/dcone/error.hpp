#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dcone {

enum class ErrorCode {
  // grid-core
  OddN,
  GridTooSmall,
  IncompatibleGrids,
  NonFinite,
  InvalidOrder,
  // obstacle-solver
  InvalidConfig,
  NoConvergence,
  DegenerateLambda,
  EmptyActiveSet,
  Infeasible,
  BranchMismatch,
  // fold-analysis
  PoleAtZ,
  OutOfDomain,
  AlphaExcluded,
  DegenerateDenominator,
  Overlap,
  ObstacleViolated,
  NoRoot,
  // recovery
  NonPeriodicV,
  NoInteriorSupport,
  NewtonStall,
  ChartDegenerate,
  SingularJacobian,
  NewtonDiverged,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dcone
