#include "visrec/contours.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <limits>

#include "visrec/error.hpp"

namespace visrec {

namespace {

// Neighbour offsets in counter-clockwise order (y grows downwards), starting east.
constexpr std::array<int, 8> kDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy = {0, -1, -1, -1, 0, 1, 1, 1};
constexpr int kEast = 0;
constexpr int kWest = 4;

struct BorderInfo {
  bool hole = false;
  int parent = 0;   // border number, 0 = none
  std::vector<Point> points;
};

// Label raster with a one-pixel zero frame around the input.
class LabelGrid {
 public:
  LabelGrid(const GrayPlane& binary)
      : width_(binary.width() + 2), height_(binary.height() + 2),
        cells_(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), 0) {
    for (int y = 0; y < binary.height(); ++y) {
      for (int x = 0; x < binary.width(); ++x) {
        const double v = binary.at(x, y);
        if (v == 1.0) {
          at(x + 1, y + 1) = 1;
        } else if (v != 0.0) {
          throw Error(Errc::non_binary_input, "find_contours expects a 0/1 plane");
        }
      }
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int& at(int x, int y) noexcept { return cells_[static_cast<std::size_t>(y * width_ + x)]; }

 private:
  int width_;
  int height_;
  std::vector<int> cells_;
};

int direction_to(int fx, int fy, int tx, int ty) {
  for (int d = 0; d < 8; ++d) {
    if (fx + kDx[d] == tx && fy + kDy[d] == ty) return d;
  }
  return -1;
}

// Follows one border starting at (sx, sy); `from_dir` points at the zero
// neighbour that triggered the start. Marks the grid with +/-nbd.
std::vector<Point> follow_border(LabelGrid& f, int sx, int sy, int from_dir, int nbd) {
  std::vector<Point> points;

  int first_dir = -1;
  for (int k = 0; k < 8; ++k) {
    const int d = (from_dir - k + 8) % 8;  // clockwise
    if (f.at(sx + kDx[d], sy + kDy[d]) != 0) {
      first_dir = d;
      break;
    }
  }
  if (first_dir < 0) {
    f.at(sx, sy) = -nbd;
    points.push_back({sx - 1, sy - 1});
    return points;
  }

  const int x1 = sx + kDx[first_dir];
  const int y1 = sy + kDy[first_dir];
  int x2 = x1, y2 = y1;
  int x3 = sx, y3 = sy;
  for (;;) {
    const int back = direction_to(x3, y3, x2, y2);
    bool east_zero_examined = false;
    int x4 = x3, y4 = y3;
    for (int k = 1; k <= 8; ++k) {
      const int d = (back + k) % 8;  // counter-clockwise
      const int nx = x3 + kDx[d];
      const int ny = y3 + kDy[d];
      if (f.at(nx, ny) != 0) {
        x4 = nx;
        y4 = ny;
        break;
      }
      if (d == kEast) east_zero_examined = true;
    }

    if (east_zero_examined) {
      f.at(x3, y3) = -nbd;
    } else if (f.at(x3, y3) == 1) {
      f.at(x3, y3) = nbd;
    }
    points.push_back({x3 - 1, y3 - 1});

    if (x4 == sx && y4 == sy && x3 == x1 && y3 == y1) break;
    x2 = x3;
    y2 = y3;
    x3 = x4;
    y3 = y4;
  }
  return points;
}

// Pixels enclosed by a closed 8-connected border walk (Pick's theorem with the
// walk length standing in for the boundary lattice count).
std::size_t enclosed_pixels(const std::vector<Point>& walk) {
  if (walk.size() <= 1) return walk.size();
  long long twice_area = 0;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    const auto& a = walk[i];
    const auto& b = walk[(i + 1) % walk.size()];
    twice_area += static_cast<long long>(a.x) * b.y - static_cast<long long>(b.x) * a.y;
  }
  const long long steps = static_cast<long long>(walk.size());
  return static_cast<std::size_t>((std::llabs(twice_area) + steps) / 2 + 1);
}

}  // namespace

Rect Contour::bounding_rect() const {
  if (points.empty()) throw Error(Errc::empty_input, "contour has no points");
  int min_x = std::numeric_limits<int>::max(), min_y = min_x;
  int max_x = std::numeric_limits<int>::min(), max_y = max_x;
  for (const auto& p : points) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  return Rect{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

std::vector<Contour> find_contours(const GrayPlane& binary) {
  if (binary.empty()) return {};
  LabelGrid f(binary);

  // Border number 1 is the frame, treated as a hole border.
  std::vector<BorderInfo> borders(2);
  borders[1].hole = true;
  int nbd = 1;

  for (int y = 1; y < f.height() - 1; ++y) {
    int lnbd = 1;
    for (int x = 1; x < f.width() - 1; ++x) {
      const int value = f.at(x, y);
      if (value == 0) continue;

      const bool outer_start = value == 1 && f.at(x - 1, y) == 0;
      const bool hole_start = !outer_start && value >= 1 && f.at(x + 1, y) == 0;
      if (outer_start || hole_start) {
        if (hole_start && value > 1) lnbd = value;
        ++nbd;
        BorderInfo info;
        info.hole = hole_start;
        const BorderInfo& prev = borders[static_cast<std::size_t>(lnbd)];
        if (outer_start) {
          info.parent = prev.hole ? lnbd : prev.parent;
        } else {
          info.parent = prev.hole ? prev.parent : lnbd;
        }
        info.points = follow_border(f, x, y, outer_start ? kWest : kEast, nbd);
        borders.push_back(std::move(info));
      }

      const int now = f.at(x, y);
      if (now != 1) lnbd = std::abs(now);
    }
  }

  // Keep outer borders; an outer border's parent is a hole whose own parent is
  // the enclosing component's outer border.
  std::vector<std::size_t> out_index(borders.size(), std::numeric_limits<std::size_t>::max());
  std::vector<Contour> contours;
  for (std::size_t b = 2; b < borders.size(); ++b) {
    if (borders[b].hole) continue;
    out_index[b] = contours.size();
    Contour c;
    c.area = enclosed_pixels(borders[b].points);
    c.points = std::move(borders[b].points);
    const int hole = borders[b].parent;
    if (hole > 1) {
      const int enclosing = borders[static_cast<std::size_t>(hole)].parent;
      c.parent = out_index[static_cast<std::size_t>(enclosing)];
    }
    contours.push_back(std::move(c));
  }
  return contours;
}

std::vector<Contour> filter_contours(const std::vector<Contour>& contours, std::size_t image_area,
                                     double min_fraction) {
  const double threshold = min_fraction * static_cast<double>(image_area);
  std::vector<std::size_t> remap(contours.size(), std::numeric_limits<std::size_t>::max());
  std::vector<Contour> kept;
  for (std::size_t i = 0; i < contours.size(); ++i) {
    if (static_cast<double>(contours[i].area) >= threshold) {
      remap[i] = kept.size();
      kept.push_back(contours[i]);
    }
  }
  for (auto& c : kept) {
    if (!c.parent) continue;
    const auto mapped = remap[*c.parent];
    if (mapped == std::numeric_limits<std::size_t>::max()) {
      c.parent.reset();
    } else {
      c.parent = mapped;
    }
  }
  return kept;
}

std::size_t largest_contour_index(const std::vector<Contour>& contours) {
  if (contours.empty()) throw Error(Errc::no_object_found, "no contour to choose from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < contours.size(); ++i) {
    if (contours[i].area > contours[best].area) best = i;
  }
  return best;
}

const Contour& largest_contour(const std::vector<Contour>& contours) {
  return contours[largest_contour_index(contours)];
}

}  // namespace visrec
