// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wbe {

enum class ErrorCode {
  FileNotFound,
  UnsupportedFormat,
  IoError,
  ParseError,
  BadLength,
  ShapeMismatch,
  EmptyInput,
  DomainError,
  NoRoot,
  KeyInvariantViolated,
  CapacityExceeded,
  KeyMismatch,
  WindowOutOfBounds,
  BadRate,
  BadCutoff,
  EncoderUnavailable,
  EncoderFailed,
  LengthMismatch,
  ZeroSignal,
  TooShort,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadLength: return "BadLength";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::KeyInvariantViolated: return "KeyInvariantViolated";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::KeyMismatch: return "KeyMismatch";
    case ErrorCode::WindowOutOfBounds: return "WindowOutOfBounds";
    case ErrorCode::BadRate: return "BadRate";
    case ErrorCode::BadCutoff: return "BadCutoff";
    case ErrorCode::EncoderUnavailable: return "EncoderUnavailable";
    case ErrorCode::EncoderFailed: return "EncoderFailed";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroSignal: return "ZeroSignal";
    case ErrorCode::TooShort: return "TooShort";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can branch on the class of error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wbe
