#include "vismca/core/geometry.hpp"

#include <algorithm>

namespace vismca {

namespace {

// Area from edge coordinates, so that the intersection of a box with itself
// reproduces its own area bit-for-bit.
double edge_area(double left, double top, double right, double bottom) noexcept {
  return (right - left) * (bottom - top);
}

}  // namespace

double iou(const BBox& a, const BBox& b) noexcept {
  const double left = std::max(a.x, b.x);
  const double top = std::max(a.y, b.y);
  const double right = std::min(a.right(), b.right());
  const double bottom = std::min(a.bottom(), b.bottom());
  if (right <= left || bottom <= top) return 0.0;

  const double inter = edge_area(left, top, right, bottom);
  const double uni = edge_area(a.x, a.y, a.right(), a.bottom()) +
                     edge_area(b.x, b.y, b.right(), b.bottom()) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace vismca
