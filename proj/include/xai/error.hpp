#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xai {

enum class ErrorCode {
  kInvalidDimension,
  kInvalidStroke,
  kShape,
  kParse,
  kInvalidMask,
  kDecode,
  kNumeric,
  kArgument,
  kModelMissing,
  kModelShape,
  kLabelCount,
  kInference,
  kNotFound,
  kUpstream,
  kStore,
  kAsset,
  kManifest,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// the HTTP layer and the CLI can map it to a status / exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace xai
