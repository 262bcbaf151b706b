#pragma once

// Binary occlusion masks: creation, brush rasterization, compositing.
//
// Coordinate convention: the cell in column c / row r is centered at the
// point (c, r). A stroke point at (2, 2) sits exactly on the center of
// cell (2, 2). Clients working in continuous canvas coordinates, where a
// pixel spans [c, c + 1), subtract 0.5 before sending points.
//
// Rasterization: a cell is covered by a stroke when the Euclidean distance
// from its center to the stroke's polyline is <= brush_radius. A single
// point stamps a disk; consecutive points add the capsule between them.
// Masks are strictly binary; there is no anti-aliasing.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xai/image.hpp"

namespace xai {

class Mask {
 public:
  Mask() = default;
  // All-zero mask. Throws kInvalidDimension unless width, height >= 1.
  Mask(int width, int height);
  // Throws kShape on size mismatch, kInvalidMask on a cell other than 0/1.
  Mask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool painted) { bits_[index(x, y)] = painted ? 1 : 0; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::size_t painted_count() const noexcept;

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

enum class StrokeMode { kPaint, kErase };

struct Point {
  float x = 0.0F;
  float y = 0.0F;

  friend bool operator==(const Point&, const Point&) = default;
};

inline constexpr float kDefaultBrushRadius = 12.0F;

struct Stroke {
  StrokeMode mode = StrokeMode::kPaint;
  float brush_radius = kDefaultBrushRadius;
  std::vector<Point> points;
};

enum class FillKind { kConstantColor, kDatasetMean };

// ImageNet channel means (0.485, 0.456, 0.406) scaled to 8 bits and rounded.
inline constexpr Rgb kDatasetMeanColor{124, 116, 104};

struct FillPolicy {
  FillKind kind = FillKind::kDatasetMean;
  Rgb color{};  // only read for kConstantColor

  static FillPolicy dataset_mean() { return {FillKind::kDatasetMean, {}}; }
  static FillPolicy constant(Rgb c) { return {FillKind::kConstantColor, c}; }

  Rgb resolve() const noexcept {
    return kind == FillKind::kDatasetMean ? kDatasetMeanColor : color;
  }

  friend bool operator==(const FillPolicy& a, const FillPolicy& b) {
    return a.kind == b.kind &&
           (a.kind == FillKind::kDatasetMean || a.color == b.color);
  }
};

Mask new_mask(int width, int height);
Mask full_mask(int width, int height);

// Throws kInvalidStroke on an empty point list, a non-positive or
// non-finite radius, or non-finite coordinates.
Mask apply_stroke(const Mask& mask, const Stroke& stroke);
// In-place variant of apply_stroke.
void apply_stroke_inplace(Mask& mask, const Stroke& stroke);

// Throws kShape when image and mask dimensions differ.
ImageBuffer composite(const ImageBuffer& image, const Mask& mask,
                      const FillPolicy& fill);

double mask_coverage(const Mask& mask) noexcept;

// Parses "mean", "black", "white" or "#RRGGBB". Throws kArgument.
FillPolicy parse_fill(std::string_view text);
// Inverse of parse_fill: "mean" or "#rrggbb".
std::string format_fill(const FillPolicy& fill);

}  // namespace xai
