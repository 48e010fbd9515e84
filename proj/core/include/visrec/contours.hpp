#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "visrec/image.hpp"

namespace visrec {

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Outer border of one 8-connected foreground component.
struct Contour {
  std::vector<Point> points;           // traced border, closed
  std::optional<std::size_t> parent;   // index of the enclosing contour, if any
  std::size_t area = 0;                // pixels enclosed by the border, border and holes included

  Rect bounding_rect() const;
};

/// Border following over a 0/1 plane (8-connected foreground, 4-connected
/// background). Returns one contour per connected component in raster order of
/// each component's first pixel. Throws non_binary_input on other values.
std::vector<Contour> find_contours(const GrayPlane& binary);

/// Keeps contours with area >= min_fraction * image_area, preserving order.
/// Parent indices are remapped; a parent that was dropped is cleared.
std::vector<Contour> filter_contours(const std::vector<Contour>& contours, std::size_t image_area,
                                     double min_fraction);

/// Index of the contour with the largest area; the first one wins ties.
std::size_t largest_contour_index(const std::vector<Contour>& contours);
const Contour& largest_contour(const std::vector<Contour>& contours);

}  // namespace visrec
