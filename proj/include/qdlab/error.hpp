#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdlab {

enum class ErrorCode {
  kInvalidArgument,
  kParseError,
  kEvalAtPole,
  kNonIntegrable,
  kNoConvergence,
  kBadRadii,
  kCriticalValue,
  kPoleImage,
  kTailTooLarge,
  kZeroMass,
  kPoleCollision,
  kTooFewPoles,
  kDegenerateAtCritical,
  kInconclusive,
  kNotStrictlyPreperiodic,
  kBadPeriod,
  kTooSmall,
  kOddCount,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without parsing messages.
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
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kEvalAtPole: return "EvalAtPole";
    case ErrorCode::kNonIntegrable: return "NonIntegrable";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kBadRadii: return "BadRadii";
    case ErrorCode::kCriticalValue: return "CriticalValue";
    case ErrorCode::kPoleImage: return "PoleImage";
    case ErrorCode::kTailTooLarge: return "TailTooLarge";
    case ErrorCode::kZeroMass: return "ZeroMass";
    case ErrorCode::kPoleCollision: return "PoleCollision";
    case ErrorCode::kTooFewPoles: return "TooFewPoles";
    case ErrorCode::kDegenerateAtCritical: return "DegenerateAtCritical";
    case ErrorCode::kInconclusive: return "Inconclusive";
    case ErrorCode::kNotStrictlyPreperiodic: return "NotStrictlyPreperiodic";
    case ErrorCode::kBadPeriod: return "BadPeriod";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kOddCount: return "OddCount";
  }
  return "Unknown";
}

}  // namespace qdlab
