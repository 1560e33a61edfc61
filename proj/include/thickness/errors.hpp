#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nir {

enum class ErrorKind {
  DegenerateSegment,
  SelfIntersection,
  TooFewVertices,
  DimensionMismatch,
  OutOfRange,
  NoTangents,
  BracketMiss,
  BoundaryPoint,
  DomainTooSmall,
  LadderExhausted,
  ComponentMismatch,
  NonpositiveThickness,
  InvalidDims,
  ZeroThicknessStart,
  InvalidArgument,
  Parse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateSegment: return "DegenerateSegment";
    case ErrorKind::SelfIntersection: return "SelfIntersection";
    case ErrorKind::TooFewVertices: return "TooFewVertices";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NoTangents: return "NoTangents";
    case ErrorKind::BracketMiss: return "BracketMiss";
    case ErrorKind::BoundaryPoint: return "BoundaryPoint";
    case ErrorKind::DomainTooSmall: return "DomainTooSmall";
    case ErrorKind::LadderExhausted: return "LadderExhausted";
    case ErrorKind::ComponentMismatch: return "ComponentMismatch";
    case ErrorKind::NonpositiveThickness: return "NonpositiveThickness";
    case ErrorKind::InvalidDims: return "InvalidDims";
    case ErrorKind::ZeroThicknessStart: return "ZeroThicknessStart";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/// Numeric failures (the computation ran but could not meet its contract)
/// as opposed to input validation failures.
inline bool is_numeric_failure(ErrorKind kind) {
  return kind == ErrorKind::BracketMiss || kind == ErrorKind::LadderExhausted;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) { throw Error(kind, detail); }

}  // namespace nir
