#include "xai/mask.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace xai {

Mask::Mask(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidDimension,
                "mask dimensions must be positive, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  width_ = width;
  height_ = height;
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

Mask::Mask(int width, int height, std::vector<std::uint8_t> bits) : Mask(width, height) {
  if (bits.size() != bits_.size()) {
    throw Error(ErrorCode::kShape, "mask bit count " + std::to_string(bits.size()) +
                                       " does not match " + std::to_string(width) + "x" +
                                       std::to_string(height));
  }
  if (std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b > 1; })) {
    throw Error(ErrorCode::kInvalidMask, "mask cells must be 0 or 1");
  }
  bits_ = std::move(bits);
}

std::size_t Mask::painted_count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Mask new_mask(int width, int height) { return Mask(width, height); }

Mask full_mask(int width, int height) {
  Mask mask(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) mask.set(x, y, true);
  }
  return mask;
}

namespace {

void validate(const Stroke& stroke) {
  if (stroke.points.empty()) {
    throw Error(ErrorCode::kInvalidStroke, "stroke has no points");
  }
  if (!(stroke.brush_radius > 0.0F) || !std::isfinite(stroke.brush_radius)) {
    throw Error(ErrorCode::kInvalidStroke, "brush radius must be positive and finite");
  }
  for (const Point& p : stroke.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::kInvalidStroke, "stroke point is not finite");
    }
  }
}

// Squared distance from (px, py) to the segment a-b (a point when a == b).
double squared_distance_to_segment(double px, double py, Point a, Point b) {
  const double ax = a.x;
  const double ay = a.y;
  const double dx = static_cast<double>(b.x) - ax;
  const double dy = static_cast<double>(b.y) - ay;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
  }
  const double qx = ax + t * dx;
  const double qy = ay + t * dy;
  return (px - qx) * (px - qx) + (py - qy) * (py - qy);
}

// Inclusive cell range [lo, hi] along one axis that can lie within `radius`
// of [min_coord, max_coord]; empty when lo > hi.
std::pair<int, int> cell_range(double min_coord, double max_coord, double radius, int extent) {
  const double lo = std::max(std::ceil(min_coord - radius), 0.0);
  const double hi = std::min(std::floor(max_coord + radius), static_cast<double>(extent - 1));
  if (lo > hi) return {1, 0};
  return {static_cast<int>(lo), static_cast<int>(hi)};
}

void rasterize_segment(Mask& mask, Point a, Point b, double radius, bool value) {
  const double r2 = radius * radius;
  const auto [x0, x1] = cell_range(std::min(a.x, b.x), std::max(a.x, b.x), radius, mask.width());
  const auto [y0, y1] = cell_range(std::min(a.y, b.y), std::max(a.y, b.y), radius, mask.height());
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (squared_distance_to_segment(x, y, a, b) <= r2) mask.set(x, y, value);
    }
  }
}

}  // namespace

void apply_stroke_inplace(Mask& mask, const Stroke& stroke) {
  validate(stroke);
  const bool value = stroke.mode == StrokeMode::kPaint;
  const double radius = stroke.brush_radius;
  const auto& pts = stroke.points;
  if (pts.size() == 1) {
    rasterize_segment(mask, pts[0], pts[0], radius, value);
    return;
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    rasterize_segment(mask, pts[i], pts[i + 1], radius, value);
  }
}

Mask apply_stroke(const Mask& mask, const Stroke& stroke) {
  Mask out = mask;
  apply_stroke_inplace(out, stroke);
  return out;
}

ImageBuffer composite(const ImageBuffer& image, const Mask& mask, const FillPolicy& fill) {
  if (image.width() != mask.width() || image.height() != mask.height()) {
    throw Error(ErrorCode::kShape,
                "mask is " + std::to_string(mask.width()) + "x" + std::to_string(mask.height()) +
                    " but image is " + std::to_string(image.width()) + "x" +
                    std::to_string(image.height()));
  }
  ImageBuffer out = image;
  const Rgb color = fill.resolve();
  auto pixels = out.pixels();
  const auto bits = mask.bits();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (bits[i] != 0) pixels[i] = color;
  }
  return out;
}

double mask_coverage(const Mask& mask) noexcept {
  if (mask.size() == 0) return 0.0;
  return static_cast<double>(mask.painted_count()) / static_cast<double>(mask.size());
}

FillPolicy parse_fill(std::string_view text) {
  if (text == "mean" || text == "dataset_mean") return FillPolicy::dataset_mean();
  if (text == "black") return FillPolicy::constant({0, 0, 0});
  if (text == "white") return FillPolicy::constant({255, 255, 255});
  if (text.size() == 7 && text[0] == '#') {
    unsigned r = 0;
    unsigned g = 0;
    unsigned b = 0;
    const std::string hex(text);
    if (hex.find_first_not_of("#0123456789abcdefABCDEF") == std::string::npos &&
        std::sscanf(hex.c_str(), "#%2x%2x%2x", &r, &g, &b) == 3) {
      return FillPolicy::constant(
          {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)});
    }
  }
  throw Error(ErrorCode::kArgument,
              "unknown fill '" + std::string(text) + "' (expected mean, black, white or #RRGGBB)");
}

std::string format_fill(const FillPolicy& fill) {
  if (fill.kind == FillKind::kDatasetMean) return "mean";
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", fill.color.r, fill.color.g, fill.color.b);
  return buf;
}

}  // namespace xai
