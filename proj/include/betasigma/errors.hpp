#pragma once

#include <stdexcept>
#include <string>

namespace betasigma {

/// Failure categories used across the library.
enum class Errc {
  OrderTooLarge,
  NonMonotonicPositions,
  SingularSystem,
  TooFewPoints,
  EmptySample,
  ZeroNoise,
  ParseError,
  EmptyFile,
  MissingPositions,
  InvalidArgument,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::OrderTooLarge: return "OrderTooLarge";
    case Errc::NonMonotonicPositions: return "NonMonotonicPositions";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::EmptySample: return "EmptySample";
    case Errc::ZeroNoise: return "ZeroNoise";
    case Errc::ParseError: return "ParseError";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::MissingPositions: return "MissingPositions";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

/// Exception type thrown by all fallible operations.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace betasigma
