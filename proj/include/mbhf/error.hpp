#pragma once
#include <stdexcept>
#include <string>

namespace mbhf {

enum class ErrorKind {
  MissingBinding,
  PoleAtPoint,
  Overflow,
  ParseError,
  GammaPole,
  NonPositiveKernelBase,
  BranchCutViolation,
  NoMatch,
  AmbiguousMatch,
  SyntaxError,
  UnknownSeed,
  ClassMismatch,
  PathStepFailed,
  PoleInNegativeExtension,
  DenominatorPochPole,
  ValidationFailure,
  DuplicateName,
  UnknownName,
  Infeasible,
  PoleAtNonpositiveInteger,
  UnregisteredDefinition,
  NonConvergent,
  BadDocument,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::MissingBinding: return "MissingBinding";
    case ErrorKind::PoleAtPoint: return "PoleAtPoint";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::GammaPole: return "GammaPole";
    case ErrorKind::NonPositiveKernelBase: return "NonPositiveKernelBase";
    case ErrorKind::BranchCutViolation: return "BranchCutViolation";
    case ErrorKind::NoMatch: return "NoMatch";
    case ErrorKind::AmbiguousMatch: return "AmbiguousMatch";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSeed: return "UnknownSeed";
    case ErrorKind::ClassMismatch: return "ClassMismatch";
    case ErrorKind::PathStepFailed: return "PathStepFailed";
    case ErrorKind::PoleInNegativeExtension: return "PoleInNegativeExtension";
    case ErrorKind::DenominatorPochPole: return "DenominatorPochPole";
    case ErrorKind::ValidationFailure: return "ValidationFailure";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::PoleAtNonpositiveInteger: return "PoleAtNonpositiveInteger";
    case ErrorKind::UnregisteredDefinition: return "UnregisteredDefinition";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::BadDocument: return "BadDocument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind k, const std::string& msg)
      : std::runtime_error(std::string(kind_name(k)) + ": " + msg), kind_(k) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mbhf
