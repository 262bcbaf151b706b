#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xai/image.hpp"
#include "xai/mask.hpp"

namespace xai {

using Bytes = std::vector<std::uint8_t>;

// Mask wire format: single-channel 8-bit PNG, 0 = visible, 255 = painted.
Bytes encode_mask(const Mask& mask);

// Accepts any lossless single-channel 8-bit raster the image codecs
// understand. Throws kParse on empty/corrupt input or a multi-channel or
// 16-bit raster, and kInvalidMask on any value other than 0 or 255.
Mask decode_mask(std::span<const std::uint8_t> bytes);

// Decodes PNG/JPEG/BMP/... to RGB8. Gray is expanded to RGB; alpha is
// composited over white. Throws kDecode.
ImageBuffer decode_image(std::span<const std::uint8_t> bytes);

// Lossless PNG encoding of an RGB8 image.
Bytes encode_png(const ImageBuffer& image);

// MIME type guessed from magic bytes; "application/octet-stream" if unknown.
const char* sniff_mime_type(std::span<const std::uint8_t> bytes);

}  // namespace xai
