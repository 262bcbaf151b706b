#include "xai/codec.hpp"

#include <cstring>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace xai {

namespace {

cv::Mat decode_unchanged(std::span<const std::uint8_t> bytes, ErrorCode code) {
  if (bytes.empty()) throw Error(code, "empty byte stream");
  // imdecode only reads from the buffer; the const_cast never leaks a write.
  const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                    const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat decoded;
  try {
    decoded = cv::imdecode(raw, cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw Error(code, std::string("image decoder failed: ") + e.what());
  }
  if (decoded.empty()) throw Error(code, "unsupported or corrupt raster");
  return decoded;
}

Bytes encode(const cv::Mat& mat) {
  std::vector<std::uint8_t> out;
  if (!cv::imencode(".png", mat, out)) {
    throw Error(ErrorCode::kParse, "PNG encoding failed");
  }
  return out;
}

std::uint8_t to_8bit(const cv::Mat& mat, int y, int x, int channel) {
  if (mat.depth() == CV_8U) return mat.ptr<std::uint8_t>(y)[x * mat.channels() + channel];
  const unsigned v = mat.ptr<std::uint16_t>(y)[x * mat.channels() + channel];
  return static_cast<std::uint8_t>((v * 255U + 32767U) / 65535U);
}

// Alpha-over-white with round-to-nearest: c * a / 255 + 255 * (255 - a) / 255.
std::uint8_t over_white(std::uint8_t c, std::uint8_t a) {
  const unsigned num = static_cast<unsigned>(c) * a + 255U * (255U - a);
  return static_cast<std::uint8_t>((num + 127U) / 255U);
}

}  // namespace

Bytes encode_mask(const Mask& mask) {
  cv::Mat mat(mask.height(), mask.width(), CV_8UC1);
  const auto bits = mask.bits();
  for (int y = 0; y < mask.height(); ++y) {
    auto* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < mask.width(); ++x) {
      row[x] = bits[static_cast<std::size_t>(y) * mask.width() + x] ? 255 : 0;
    }
  }
  return encode(mat);
}

Mask decode_mask(std::span<const std::uint8_t> bytes) {
  const cv::Mat mat = decode_unchanged(bytes, ErrorCode::kParse);
  if (mat.channels() != 1 || mat.depth() != CV_8U) {
    throw Error(ErrorCode::kParse, "mask must be a single-channel 8-bit raster");
  }
  std::vector<std::uint8_t> bits(mat.total());
  for (int y = 0; y < mat.rows; ++y) {
    const auto* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < mat.cols; ++x) {
      const std::uint8_t v = row[x];
      if (v != 0 && v != 255) {
        throw Error(ErrorCode::kInvalidMask, "mask value " + std::to_string(v) + " at (" +
                                                 std::to_string(x) + ", " + std::to_string(y) +
                                                 ") is neither 0 nor 255");
      }
      bits[static_cast<std::size_t>(y) * mat.cols + x] = v == 255 ? 1 : 0;
    }
  }
  return Mask(mat.cols, mat.rows, std::move(bits));
}

ImageBuffer decode_image(std::span<const std::uint8_t> bytes) {
  const cv::Mat mat = decode_unchanged(bytes, ErrorCode::kDecode);
  if (mat.depth() != CV_8U && mat.depth() != CV_16U) {
    throw Error(ErrorCode::kDecode, "unsupported sample depth");
  }
  const int channels = mat.channels();
  if (channels != 1 && channels != 3 && channels != 4) {
    throw Error(ErrorCode::kDecode, "unsupported channel count " + std::to_string(channels));
  }
  ImageBuffer out(mat.cols, mat.rows);
  for (int y = 0; y < mat.rows; ++y) {
    for (int x = 0; x < mat.cols; ++x) {
      Rgb& px = out.at(x, y);
      if (channels == 1) {
        const std::uint8_t v = to_8bit(mat, y, x, 0);
        px = {v, v, v};
        continue;
      }
      // OpenCV stores BGR(A).
      px = {to_8bit(mat, y, x, 2), to_8bit(mat, y, x, 1), to_8bit(mat, y, x, 0)};
      if (channels == 4) {
        const std::uint8_t a = to_8bit(mat, y, x, 3);
        px = {over_white(px.r, a), over_white(px.g, a), over_white(px.b, a)};
      }
    }
  }
  return out;
}

Bytes encode_png(const ImageBuffer& image) {
  cv::Mat mat(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < image.width(); ++x) {
      const Rgb& px = image.at(x, y);
      row[3 * x + 0] = px.b;
      row[3 * x + 1] = px.g;
      row[3 * x + 2] = px.r;
    }
  }
  return encode(mat);
}

const char* sniff_mime_type(std::span<const std::uint8_t> bytes) {
  auto starts_with = [&](std::initializer_list<std::uint8_t> magic) {
    return bytes.size() >= magic.size() &&
           std::equal(magic.begin(), magic.end(), bytes.begin());
  };
  if (starts_with({0x89, 'P', 'N', 'G'})) return "image/png";
  if (starts_with({0xFF, 0xD8, 0xFF})) return "image/jpeg";
  if (starts_with({'B', 'M'})) return "image/bmp";
  if (starts_with({'R', 'I', 'F', 'F'})) return "image/webp";
  return "application/octet-stream";
}

}  // namespace xai
