#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "odms/contour.hpp"
#include "odms/grid.hpp"

namespace odms {

/// Even-odd scanline fill of a closed polygon given in pixel coordinates
/// (x = column, y = row, pixel (r, c) spans [c, c+1) x [r, r+1)).  A pixel is
/// set when its centre lies inside the polygon; crossings use the half-open
/// rule y0 <= y < y1 so shared vertices are counted once.
inline void fill_polygon(Mask& mask, std::span<const Point2> poly) {
  const int rows = mask.height();
  const int cols = mask.width();
  if (poly.size() < 3 || rows == 0 || cols == 0) return;

  std::vector<std::vector<double>> crossings(static_cast<std::size_t>(rows));
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point2 a = poly[i];
    Point2 b = poly[(i + 1) % n];
    if (a.y == b.y) continue;
    if (a.y > b.y) std::swap(a, b);
    // rows whose centre r + 0.5 satisfies a.y <= r + 0.5 < b.y
    const int r0 = std::max(0, static_cast<int>(std::ceil(a.y - 0.5)));
    const int r1 = std::min(rows - 1, static_cast<int>(std::ceil(b.y - 0.5)) - 1);
    const double slope = (b.x - a.x) / (b.y - a.y);
    for (int r = r0; r <= r1; ++r) {
      const double yc = r + 0.5;
      crossings[static_cast<std::size_t>(r)].push_back(a.x + (yc - a.y) * slope);
    }
  }

  for (int r = 0; r < rows; ++r) {
    auto& xs = crossings[static_cast<std::size_t>(r)];
    if (xs.size() < 2) continue;
    std::sort(xs.begin(), xs.end());
    auto line = mask.row(r);
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      // columns with x0 <= c + 0.5 < x1
      const int c0 = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
      const int c1 = std::min(cols, static_cast<int>(std::ceil(xs[k + 1] - 0.5)));
      for (int c = c0; c < c1; ++c) line[static_cast<std::size_t>(c)] = 1;
    }
  }
}

}  // namespace odms
