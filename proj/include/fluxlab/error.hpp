#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fluxlab {

enum class ErrorCode {
  InvalidSpec,
  SpecTooCoarse,
  DisconnectedDomain,
  NoSuchHole,
  LengthMismatch,
  MissingEdge,
  InconsistentSizes,
  BadSlit,
  TooFewPoints,
  InvalidArgument,
  NoConvergence,
  NonHalfIntegerFlux,
  CoverNotConnected,
  InconsistentHolonomy,
  DegenerateProjection,
  NoSignChange,
  PreconditionViolated,
  EmptyFamily,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (and tests) can dispatch on the kind rather than the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::SpecTooCoarse: return "SpecTooCoarse";
    case ErrorCode::DisconnectedDomain: return "DisconnectedDomain";
    case ErrorCode::NoSuchHole: return "NoSuchHole";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingEdge: return "MissingEdge";
    case ErrorCode::InconsistentSizes: return "InconsistentSizes";
    case ErrorCode::BadSlit: return "BadSlit";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonHalfIntegerFlux: return "NonHalfIntegerFlux";
    case ErrorCode::CoverNotConnected: return "CoverNotConnected";
    case ErrorCode::InconsistentHolonomy: return "InconsistentHolonomy";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace fluxlab
