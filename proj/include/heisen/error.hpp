#pragma once

#include <stdexcept>
#include <string>

namespace heisen {

enum class Err {
  // validation
  NonPositiveLength,
  NotABijection,
  ReduciblePermutation,
  ParseError,
  ValidationError,
  // numerical guards
  OutOfDomain,
  TauNotInCone,
  InconsistentSystem,
  NotWeilIntegral,
  HeightsNotInCone,
  MeshTooCoarse,
  GridTooCoarse,
  WindowTooLong,
  TowerConstructionFailed,
  ChartExit,
  NumericalGuard,
};

inline const char* errName(Err e) {
  switch (e) {
    case Err::NonPositiveLength: return "NonPositiveLength";
    case Err::NotABijection: return "NotABijection";
    case Err::ReduciblePermutation: return "ReduciblePermutation";
    case Err::ParseError: return "ParseError";
    case Err::ValidationError: return "ValidationError";
    case Err::OutOfDomain: return "OutOfDomain";
    case Err::TauNotInCone: return "TauNotInCone";
    case Err::InconsistentSystem: return "InconsistentSystem";
    case Err::NotWeilIntegral: return "NotWeilIntegral";
    case Err::HeightsNotInCone: return "HeightsNotInCone";
    case Err::MeshTooCoarse: return "MeshTooCoarse";
    case Err::GridTooCoarse: return "GridTooCoarse";
    case Err::WindowTooLong: return "WindowTooLong";
    case Err::TowerConstructionFailed: return "TowerConstructionFailed";
    case Err::ChartExit: return "ChartExit";
    case Err::NumericalGuard: return "NumericalGuard";
  }
  return "Unknown";
}

/// True for failures of input/spec validation (CLI exit code 2), false for
/// numerical-guard failures (exit code 3).
inline bool isValidationError(Err e) {
  switch (e) {
    case Err::NonPositiveLength:
    case Err::NotABijection:
    case Err::ReduciblePermutation:
    case Err::ParseError:
    case Err::ValidationError:
    case Err::OutOfDomain:
    case Err::TauNotInCone:
    case Err::InconsistentSystem:
    case Err::NotWeilIntegral:
    case Err::HeightsNotInCone:
    case Err::MeshTooCoarse:
    case Err::GridTooCoarse:
    case Err::WindowTooLong:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& what)
      : std::runtime_error(std::string(errName(kind)) + ": " + what),
        kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

}  // namespace heisen
