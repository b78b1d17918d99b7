#include "pixmap/error.hpp"

namespace pixmap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedHeader: return "malformed_header";
    case ErrorCode::kTruncatedPayload: return "truncated_payload";
    case ErrorCode::kUnsupportedFormat: return "unsupported_format";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kShapeMismatch: return "shape_mismatch";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kUsage: return "usage";
  }
  return "unknown";
}

}  // namespace pixmap
