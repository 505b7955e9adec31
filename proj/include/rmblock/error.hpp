#pragma once
#include <stdexcept>
#include <string>

namespace rmb {

enum class ErrorKind {
  NonSquare,
  NegativeEntry,
  AsymmetricBeyondTolerance,
  UnsupportedK,
  NoSupport,
  Reducible,
  InvalidArgument,
  NoConvergence,
  WrongBranch,
  FitDegenerate,
  ZeroComponent,
  QuadratureOverflow,
  NotConverged,
  DomainError,
  PoleParameter,
  BranchCut,
  NonConvergent,
  SeriesNotConverged,
  SingularAtZero,
  InvalidProblem,
  QuadratureFailure,
  TooManyDiscards,
  Config,
  Io,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rmb
