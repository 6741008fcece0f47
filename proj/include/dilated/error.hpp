#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dilated {

enum class ErrorKind {
  InvalidArgument,
  DegenerateInput,
  ZeroConstantTerm,
  InconsistentClassification,
  NoInnerRoot,
  WrongWeightKind,
  NonConvergence,
  NotOuter,
  BoundedSequence,
  GramNotPositive,
  SizeLimit,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::ZeroConstantTerm: return "ZeroConstantTerm";
    case ErrorKind::InconsistentClassification: return "InconsistentClassification";
    case ErrorKind::NoInnerRoot: return "NoInnerRoot";
    case ErrorKind::WrongWeightKind: return "WrongWeightKind";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NotOuter: return "NotOuter";
    case ErrorKind::BoundedSequence: return "BoundedSequence";
    case ErrorKind::GramNotPositive: return "GramNotPositive";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Exception type for every library failure. The kind decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Non-fatal diagnostic attached to a report (BoundaryWarning, NonExhausted, ...).
struct Warning {
  std::string kind;
  std::string message;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace dilated
