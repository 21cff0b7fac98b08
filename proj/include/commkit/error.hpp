#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace commkit {

enum class ErrorCode {
  NodeNotFound,
  InvalidPair,
  EdgeNotFound,
  EmptyGraph,
  FormatError,
  UnsupportedFormat,
  InvalidConfig,
  KNotReached,
  UndefinedModularity,
  PartitionMismatch,
  InsufficientCurve,
  DatasetMissing,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::NodeNotFound: return "NodeNotFound";
  case ErrorCode::InvalidPair: return "InvalidPair";
  case ErrorCode::EdgeNotFound: return "EdgeNotFound";
  case ErrorCode::EmptyGraph: return "EmptyGraph";
  case ErrorCode::FormatError: return "FormatError";
  case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
  case ErrorCode::InvalidConfig: return "InvalidConfig";
  case ErrorCode::KNotReached: return "KNotReached";
  case ErrorCode::UndefinedModularity: return "UndefinedModularity";
  case ErrorCode::PartitionMismatch: return "PartitionMismatch";
  case ErrorCode::InsufficientCurve: return "InsufficientCurve";
  case ErrorCode::DatasetMissing: return "DatasetMissing";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the failure
/// class; `line()` is set by the parsers when the error has a source line.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(compose(code, message, line)), code_(code),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

private:
  static std::string compose(ErrorCode code, const std::string& message,
                             std::optional<std::size_t> line) {
    std::string out(to_string(code));
    if (line) out += " at line " + std::to_string(*line);
    out += ": ";
    out += message;
    return out;
  }

  ErrorCode code_;
  std::optional<std::size_t> line_;
};

} // namespace commkit
