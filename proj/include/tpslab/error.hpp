#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tpslab {

enum class ErrorKind {
  NotHermitian,
  NotUnitary,
  NoConvergence,
  DimensionOverflow,
  DimensionMismatch,
  EmptyKeepSet,
  InvalidFactorDim,
  AngleLengthMismatch,
  ZeroVector,
  NotProductState,
  InvalidState,
  InvalidConfig,
  AmbiguousClustering,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionOverflow: return "DimensionOverflow";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyKeepSet: return "EmptyKeepSet";
    case ErrorKind::InvalidFactorDim: return "InvalidFactorDim";
    case ErrorKind::AngleLengthMismatch: return "AngleLengthMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NotProductState: return "NotProductState";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::AmbiguousClustering: return "AmbiguousClustering";
  }
  return "Unknown";
}

}  // namespace tpslab
