#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pixmap {

/// Failure categories surfaced to callers and to the CLI error stream.
enum class ErrorCode {
  kMalformedHeader,
  kTruncatedPayload,
  kUnsupportedFormat,
  kInvalidArgument,
  kShapeMismatch,
  kIo,
  kDegenerate,
  kUsage,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pixmap
