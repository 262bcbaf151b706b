#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "xai/image.hpp"

namespace xai {

inline constexpr int kInputSize = 224;
inline constexpr int kInputChannels = 3;
inline constexpr std::size_t kInputElements =
    static_cast<std::size_t>(kInputChannels) * kInputSize * kInputSize;

inline constexpr std::array<double, 3> kImageNetMean{0.485, 0.456, 0.406};
inline constexpr std::array<double, 3> kImageNetStd{0.229, 0.224, 0.225};

// Normalized 1x3x224x224 float tensor, channel-major (NCHW).
class InputTensor {
 public:
  InputTensor() : values_(kInputElements, 0.0F) {}
  // Throws kShape unless values.size() == kInputElements.
  explicit InputTensor(std::vector<float> values);

  static constexpr std::array<int, 4> shape() {
    return {1, kInputChannels, kInputSize, kInputSize};
  }

  float at(int channel, int y, int x) const {
    return values_[offset(channel, y, x)];
  }
  float& at(int channel, int y, int x) { return values_[offset(channel, y, x)]; }

  std::span<const float> values() const noexcept { return values_; }
  std::span<float> values() noexcept { return values_; }

  bool all_finite() const noexcept;

  friend bool operator==(const InputTensor&, const InputTensor&) = default;

 private:
  static std::size_t offset(int channel, int y, int x) {
    return (static_cast<std::size_t>(channel) * kInputSize +
            static_cast<std::size_t>(y)) *
               kInputSize +
           static_cast<std::size_t>(x);
  }

  std::vector<float> values_;
};

enum class ResizeMode {
  // Full frame squashed to 224x224; nothing is cropped away.
  kDirect,
  // Shorter side to 256, then a centered 224x224 crop.
  kResizeCenterCrop,
};

std::string_view to_string(ResizeMode mode);
// Accepts "direct" or "resize256-crop224". Throws kArgument.
ResizeMode parse_resize_mode(std::string_view text);

// Separable bilinear (triangle filter) resampling. When shrinking, the
// filter support widens with the scale factor so every source pixel
// contributes; when enlarging it is plain bilinear interpolation with
// half-pixel centers. Same-size input is returned unchanged.
ImageBuffer resize_bilinear(const ImageBuffer& image, int width, int height);

ImageBuffer center_crop(const ImageBuffer& image, int width, int height);

ImageBuffer resize_to_input(const ImageBuffer& image,
                            ResizeMode mode = ResizeMode::kDirect);

// value = (pixel / 255 - mean_c) / std_c. Throws kShape unless 224x224.
InputTensor normalize(const ImageBuffer& image);

}  // namespace xai
