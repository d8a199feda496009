#pragma once

#include <stdexcept>
#include <string>

namespace steiner {

// Single relative tolerance used throughout the library. Comparisons always
// scale it by the magnitude of the quantities involved, never absolutely.
inline constexpr double kDefaultTolerance = 1e-9;

enum class ErrorKind {
  DegenerateConfiguration,
  DegenerateConic,
  NormalizationSingular,
  NotInPlane,
  PoleEncountered,
  InvalidScale,
  RankDeficient,
  ParseError,
  ValidationError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::DegenerateConic: return "DegenerateConic";
    case ErrorKind::NormalizationSingular: return "NormalizationSingular";
    case ErrorKind::NotInPlane: return "NotInPlane";
    case ErrorKind::PoleEncountered: return "PoleEncountered";
    case ErrorKind::InvalidScale: return "InvalidScale";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace steiner
