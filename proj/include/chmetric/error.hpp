#pragma once

#include <stdexcept>
#include <string>

namespace chm {

enum class ErrorKind {
  BetaUndefinedAtBreaking,
  EtaOutOfRange,
  ZeroSolution,
  StepRejected,
  TargetOutOfRange,
  ZeroEnergy,
  DegeneratePressure,
  CflViolation,
  GridMismatch,
  UnknownFigure,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chm
