#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace weberbits {

enum class ErrorKind {
  NonPositiveInput,
  BelowThreshold,
  UnitMismatch,
  NegativeResponse,
  InvalidSteps,
  OutOfRange,
  InvalidDistribution,
  InvalidWindowSize,
  WindowTooLarge,
  InvalidHop,
  UnsupportedFormat,
  CorruptFile,
  IoError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::BelowThreshold: return "BelowThreshold";
    case ErrorKind::UnitMismatch: return "UnitMismatch";
    case ErrorKind::NegativeResponse: return "NegativeResponse";
    case ErrorKind::InvalidSteps: return "InvalidSteps";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::InvalidWindowSize: return "InvalidWindowSize";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::InvalidHop: return "InvalidHop";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::CorruptFile: return "CorruptFile";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

// Input/format problems are reported separately from domain validation
// failures so the CLI can map them to distinct exit codes.
constexpr bool is_format_error(ErrorKind kind) noexcept {
  return kind == ErrorKind::UnsupportedFormat || kind == ErrorKind::CorruptFile ||
         kind == ErrorKind::IoError;
}

namespace detail {

// Shortest decimal form that round-trips to the same double.
inline std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace weberbits
