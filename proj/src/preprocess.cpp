#include "xai/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace xai {

InputTensor::InputTensor(std::vector<float> values) : values_(std::move(values)) {
  if (values_.size() != kInputElements) {
    throw Error(ErrorCode::kShape, "input tensor must hold 1x3x224x224 values, got " +
                                       std::to_string(values_.size()));
  }
}

bool InputTensor::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](float v) { return std::isfinite(v); });
}

std::string_view to_string(ResizeMode mode) {
  return mode == ResizeMode::kDirect ? "direct" : "resize256-crop224";
}

ResizeMode parse_resize_mode(std::string_view text) {
  if (text == "direct") return ResizeMode::kDirect;
  if (text == "resize256-crop224" || text == "crop") return ResizeMode::kResizeCenterCrop;
  throw Error(ErrorCode::kArgument, "unknown resize mode '" + std::string(text) + "'");
}

namespace {

struct Tap {
  int first = 0;
  std::vector<double> weights;
};

// Triangle-filter taps for each output coordinate along one axis.
std::vector<Tap> compute_taps(int in_size, int out_size) {
  const double scale = static_cast<double>(in_size) / out_size;
  const double filter_scale = std::max(scale, 1.0);
  const double support = filter_scale;
  std::vector<Tap> taps(static_cast<std::size_t>(out_size));
  for (int o = 0; o < out_size; ++o) {
    const double center = (o + 0.5) * scale;
    const int lo = std::max(static_cast<int>(std::floor(center - support + 0.5)), 0);
    const int hi = std::min(static_cast<int>(std::floor(center + support + 0.5)), in_size);
    Tap& tap = taps[static_cast<std::size_t>(o)];
    tap.first = lo;
    double total = 0.0;
    for (int i = lo; i < hi; ++i) {
      const double w = std::max(0.0, 1.0 - std::abs((i - center + 0.5) / filter_scale));
      tap.weights.push_back(w);
      total += w;
    }
    if (total > 0.0) {
      for (double& w : tap.weights) w /= total;
    }
  }
  return taps;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

ImageBuffer resize_bilinear(const ImageBuffer& image, int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidDimension, "resize target must be positive");
  }
  if (image.width() == width && image.height() == height) return image;

  const auto x_taps = compute_taps(image.width(), width);
  const auto y_taps = compute_taps(image.height(), height);

  // Horizontal pass into a width x in_height double buffer (3 channels).
  const int in_h = image.height();
  std::vector<double> horiz(static_cast<std::size_t>(width) * in_h * 3);
  for (int y = 0; y < in_h; ++y) {
    for (int x = 0; x < width; ++x) {
      const Tap& tap = x_taps[static_cast<std::size_t>(x)];
      double r = 0.0, g = 0.0, b = 0.0;
      for (std::size_t i = 0; i < tap.weights.size(); ++i) {
        const Rgb& px = image.at(tap.first + static_cast<int>(i), y);
        r += tap.weights[i] * px.r;
        g += tap.weights[i] * px.g;
        b += tap.weights[i] * px.b;
      }
      double* dst = &horiz[(static_cast<std::size_t>(y) * width + x) * 3];
      dst[0] = r;
      dst[1] = g;
      dst[2] = b;
    }
  }

  ImageBuffer out(width, height);
  for (int y = 0; y < height; ++y) {
    const Tap& tap = y_taps[static_cast<std::size_t>(y)];
    for (int x = 0; x < width; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (std::size_t i = 0; i < tap.weights.size(); ++i) {
        const double* src =
            &horiz[(static_cast<std::size_t>(tap.first + static_cast<int>(i)) * width + x) * 3];
        for (int c = 0; c < 3; ++c) acc[c] += tap.weights[i] * src[c];
      }
      out.at(x, y) = {to_byte(acc[0]), to_byte(acc[1]), to_byte(acc[2])};
    }
  }
  return out;
}

ImageBuffer center_crop(const ImageBuffer& image, int width, int height) {
  if (width > image.width() || height > image.height()) {
    throw Error(ErrorCode::kShape, "crop larger than image");
  }
  const int left = (image.width() - width) / 2;
  const int top = (image.height() - height) / 2;
  ImageBuffer out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.at(x, y) = image.at(left + x, top + y);
  }
  return out;
}

ImageBuffer resize_to_input(const ImageBuffer& image, ResizeMode mode) {
  if (mode == ResizeMode::kDirect) return resize_bilinear(image, kInputSize, kInputSize);

  constexpr int kShortSide = 256;
  const int w = image.width();
  const int h = image.height();
  int new_w = kShortSide;
  int new_h = kShortSide;
  if (w < h) {
    new_h = static_cast<int>(static_cast<long long>(kShortSide) * h / w);
  } else {
    new_w = static_cast<int>(static_cast<long long>(kShortSide) * w / h);
  }
  return center_crop(resize_bilinear(image, new_w, new_h), kInputSize, kInputSize);
}

InputTensor normalize(const ImageBuffer& image) {
  if (image.width() != kInputSize || image.height() != kInputSize) {
    throw Error(ErrorCode::kShape, "normalize expects 224x224, got " +
                                       std::to_string(image.width()) + "x" +
                                       std::to_string(image.height()));
  }
  InputTensor tensor;
  for (int y = 0; y < kInputSize; ++y) {
    for (int x = 0; x < kInputSize; ++x) {
      const Rgb& px = image.at(x, y);
      const std::uint8_t channels[3] = {px.r, px.g, px.b};
      for (int c = 0; c < 3; ++c) {
        tensor.at(c, y, x) = static_cast<float>(
            (channels[c] / 255.0 - kImageNetMean[static_cast<std::size_t>(c)]) /
            kImageNetStd[static_cast<std::size_t>(c)]);
      }
    }
  }
  return tensor;
}

}  // namespace xai
