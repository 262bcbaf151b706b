#include "xai/image.hpp"

#include <string>

namespace xai {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDimension: return "invalid_dimension";
    case ErrorCode::kInvalidStroke: return "invalid_stroke";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInvalidMask: return "invalid_mask";
    case ErrorCode::kDecode: return "decode";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kArgument: return "argument";
    case ErrorCode::kModelMissing: return "model_missing";
    case ErrorCode::kModelShape: return "model_shape";
    case ErrorCode::kLabelCount: return "label_count";
    case ErrorCode::kInference: return "inference";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kUpstream: return "upstream";
    case ErrorCode::kStore: return "store";
    case ErrorCode::kAsset: return "asset";
    case ErrorCode::kManifest: return "manifest";
  }
  return "unknown";
}

namespace {

void check_dimensions(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidDimension,
                "image dimensions must be positive, got " + std::to_string(width) +
                    "x" + std::to_string(height));
  }
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, Rgb fill) {
  check_dimensions(width, height);
  width_ = width;
  height_ = height;
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<Rgb> pixels) {
  check_dimensions(width, height);
  if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::kShape, "pixel count " + std::to_string(pixels.size()) +
                                       " does not match " + std::to_string(width) + "x" +
                                       std::to_string(height));
  }
  width_ = width;
  height_ = height;
  pixels_ = std::move(pixels);
}

}  // namespace xai
