#pragma once

namespace vismca {

/// Axis-aligned box in pixels, top-left origin.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  [[nodiscard]] double right() const noexcept { return x + w; }
  [[nodiscard]] double bottom() const noexcept { return y + h; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Intersection over union, in [0, 1]; 0 for disjoint boxes and exactly 1
/// for identical ones.
[[nodiscard]] double iou(const BBox& a, const BBox& b) noexcept;

}  // namespace vismca
