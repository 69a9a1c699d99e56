#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace etaflow {

/// Every failure the library can report. The CLI prints the name and maps
/// the code onto its exit status (input errors -> 2, check failures -> 1).
enum class ErrorCode {
  BackendMismatch,
  IndistinguishableFromZero,
  DimensionMismatch,
  NotNilpotent,
  NotHermitian,
  NotSkewHermitian,
  Degenerate,
  NotSelfAdjoint,
  ParityMismatch,
  SkewInput,
  AlreadyHermitian,
  RoutesDisagree,
  NotInvertibleOverO,
  TruncationInsufficient,
  NonRealLeadingCoefficient,
  OracleUnstable,
  NoSolution,
  DegenerateForm,
  NotAComplex,
  NotASeifertMatrix,
  InvalidLocalizationPoint,
  ParseError,
  InvalidArgument,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::BackendMismatch: return "BackendMismatch";
  case ErrorCode::IndistinguishableFromZero: return "IndistinguishableFromZero";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::NotNilpotent: return "NotNilpotent";
  case ErrorCode::NotHermitian: return "NotHermitian";
  case ErrorCode::NotSkewHermitian: return "NotSkewHermitian";
  case ErrorCode::Degenerate: return "Degenerate";
  case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
  case ErrorCode::ParityMismatch: return "ParityMismatch";
  case ErrorCode::SkewInput: return "SkewInput";
  case ErrorCode::AlreadyHermitian: return "AlreadyHermitian";
  case ErrorCode::RoutesDisagree: return "RoutesDisagree";
  case ErrorCode::NotInvertibleOverO: return "NotInvertibleOverO";
  case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
  case ErrorCode::NonRealLeadingCoefficient: return "NonRealLeadingCoefficient";
  case ErrorCode::OracleUnstable: return "OracleUnstable";
  case ErrorCode::NoSolution: return "NoSolution";
  case ErrorCode::DegenerateForm: return "DegenerateForm";
  case ErrorCode::NotAComplex: return "NotAComplex";
  case ErrorCode::NotASeifertMatrix: return "NotASeifertMatrix";
  case ErrorCode::InvalidLocalizationPoint: return "InvalidLocalizationPoint";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

} // namespace etaflow
