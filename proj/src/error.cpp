#include "chmetric/error.hpp"

namespace chm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BetaUndefinedAtBreaking: return "BetaUndefinedAtBreaking";
    case ErrorKind::EtaOutOfRange: return "EtaOutOfRange";
    case ErrorKind::ZeroSolution: return "ZeroSolution";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorKind::ZeroEnergy: return "ZeroEnergy";
    case ErrorKind::DegeneratePressure: return "DegeneratePressure";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::UnknownFigure: return "UnknownFigure";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace chm
