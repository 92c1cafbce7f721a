#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace odms {

struct Extent {
  int height = 0;
  int width = 0;

  friend bool operator==(const Extent&, const Extent&) = default;
};

/// Dense row-major 2-D grid.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int height, int width, T fill = T{})
      : extent_{height, width} {
    if (height < 0 || width < 0) throw std::invalid_argument("Grid: negative extent");
    data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
  }
  explicit Grid(Extent e, T fill = T{}) : Grid(e.height, e.width, fill) {}

  int height() const noexcept { return extent_.height; }
  int width() const noexcept { return extent_.width; }
  Extent extent() const noexcept { return extent_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int row, int col) noexcept { return data_[index(row, col)]; }
  const T& operator()(int row, int col) const noexcept { return data_[index(row, col)]; }

  bool contains(int row, int col) const noexcept {
    return row >= 0 && col >= 0 && row < extent_.height && col < extent_.width;
  }

  std::span<T> row(int r) noexcept {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(extent_.width)};
  }
  std::span<const T> row(int r) const noexcept {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(extent_.width)};
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(extent_.width) +
           static_cast<std::size_t>(col);
  }

  Extent extent_{};
  std::vector<T> data_;
};

/// Binary segmentation mask; 1 = object, 0 = background.
using Mask = Grid<std::uint8_t>;

inline std::int64_t pixel_area(const Mask& mask) {
  std::int64_t n = 0;
  for (auto v : mask.data()) n += v != 0;
  return n;
}

inline bool is_binary(const Mask& mask) {
  for (auto v : mask.data())
    if (v > 1) return false;
  return true;
}

}  // namespace odms
