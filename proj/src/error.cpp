#include "rmblock/error.hpp"

namespace rmb {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::AsymmetricBeyondTolerance: return "AsymmetricBeyondTolerance";
    case ErrorKind::UnsupportedK: return "UnsupportedK";
    case ErrorKind::NoSupport: return "NoSupport";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::WrongBranch: return "WrongBranch";
    case ErrorKind::FitDegenerate: return "FitDegenerate";
    case ErrorKind::ZeroComponent: return "ZeroComponent";
    case ErrorKind::QuadratureOverflow: return "QuadratureOverflow";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::PoleParameter: return "PoleParameter";
    case ErrorKind::BranchCut: return "BranchCut";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::SeriesNotConverged: return "SeriesNotConverged";
    case ErrorKind::SingularAtZero: return "SingularAtZero";
    case ErrorKind::InvalidProblem: return "InvalidProblem";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::TooManyDiscards: return "TooManyDiscards";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace rmb
