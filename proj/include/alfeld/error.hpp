// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace alfeld {

/// Error categories raised by the library. Each value corresponds to a
/// documented failure mode of one operation.
enum class Err {
  NonConforming,
  DegenerateCell,
  DegenerateChild,
  DimensionMismatch,
  SplitPointOutside,
  SplitPointOnBoundary,
  SimplexMismatch,
  CellMismatch,
  MeshMismatch,
  UnsupportedDegree,
  DegreeMismatch,
  DegreeTooHigh,
  SingularNormalSystem,
  SingularGradientSystem,
  SingularDofMatrix,
  MeanNotZero,
  UnsupportedKind,
  DimensionRule,
  NotSPD,
  MassNotSPD,
  SingularToTolerance,
  EmptyVelocitySpace,
  HypothesisViolated,
  FluxSystemSingular,
  SolverFailure,
  IoError,
  InvalidArgument,
};

inline const char* to_string(Err e) {
  switch (e) {
    case Err::NonConforming: return "NonConforming";
    case Err::DegenerateCell: return "DegenerateCell";
    case Err::DegenerateChild: return "DegenerateChild";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::SplitPointOutside: return "SplitPointOutside";
    case Err::SplitPointOnBoundary: return "SplitPointOnBoundary";
    case Err::SimplexMismatch: return "SimplexMismatch";
    case Err::CellMismatch: return "CellMismatch";
    case Err::MeshMismatch: return "MeshMismatch";
    case Err::UnsupportedDegree: return "UnsupportedDegree";
    case Err::DegreeMismatch: return "DegreeMismatch";
    case Err::DegreeTooHigh: return "DegreeTooHigh";
    case Err::SingularNormalSystem: return "SingularNormalSystem";
    case Err::SingularGradientSystem: return "SingularGradientSystem";
    case Err::SingularDofMatrix: return "SingularDofMatrix";
    case Err::MeanNotZero: return "MeanNotZero";
    case Err::UnsupportedKind: return "UnsupportedKind";
    case Err::DimensionRule: return "DimensionRule";
    case Err::NotSPD: return "NotSPD";
    case Err::MassNotSPD: return "MassNotSPD";
    case Err::SingularToTolerance: return "SingularToTolerance";
    case Err::EmptyVelocitySpace: return "EmptyVelocitySpace";
    case Err::HypothesisViolated: return "HypothesisViolated";
    case Err::FluxSystemSingular: return "FluxSystemSingular";
    case Err::SolverFailure: return "SolverFailure";
    case Err::IoError: return "IoError";
    case Err::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Err code() const { return code_; }

 private:
  Err code_;
};

#define ALFELD_REQUIRE(cond, code, msg) \
  do {                                  \
    if (!(cond)) throw ::alfeld::Error((code), (msg)); \
  } while (0)

}  // namespace alfeld
