#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "odms/errors.hpp"
#include "odms/geometry.hpp"
#include "odms/grid.hpp"
#include "odms/mask_synth.hpp"

namespace odms {

inline constexpr int kNetworkInputSize = 112;

enum class RadialProfile { linear, quadratic };

struct NetworkInput {
  std::vector<Mask> mask_stack;
  std::optional<Grid<double>> radial_image;
  std::vector<double> z_bar;    // (z_i - z_1) / (z_n - z_1), 1 < i < n
  std::vector<double> delta_z;  // z_i - z_1, 1 < i <= n

  friend bool operator==(const NetworkInput&, const NetworkInput&) = default;
};

struct LabelSet {
  double depth = 0.0;       // d1
  double norm_depth = 0.0;  // d1 / (z_n - z_1)
  double rel_scale = 0.0;   // l_n / l_1 = d1 / d_n
};

namespace detail {

struct BinWeight {
  int src;
  double weight;
};

/// Overlap of each destination bin [j*k, (j+1)*k) with unit source cells.
inline std::vector<std::vector<BinWeight>> bin_weights(int src, int dst) {
  const double k = static_cast<double>(src) / dst;
  std::vector<std::vector<BinWeight>> bins(static_cast<std::size_t>(dst));
  for (int j = 0; j < dst; ++j) {
    const double lo = j * k, hi = (j + 1) * k;
    const int first = static_cast<int>(std::floor(lo));
    const int last = std::min(src - 1, static_cast<int>(std::ceil(hi)) - 1);
    for (int s = first; s <= last; ++s) {
      const double w = std::min(hi, s + 1.0) - std::max(lo, static_cast<double>(s));
      if (w > 0.0) bins[static_cast<std::size_t>(j)].push_back({s, w});
    }
  }
  return bins;
}

}  // namespace detail

/// Area-preserving binary resize: a destination pixel is foreground when at
/// least half of the source area it covers (with fractional coverage at bin
/// edges) is foreground.
inline Mask downsample(const Mask& mask, Extent out) {
  const auto rows = detail::bin_weights(mask.height(), out.height);
  const auto cols = detail::bin_weights(mask.width(), out.width);

  Grid<double> partial(mask.height(), out.width);
  for (int r = 0; r < mask.height(); ++r) {
    auto src = mask.row(r);
    auto dst = partial.row(r);
    for (int j = 0; j < out.width; ++j) {
      double acc = 0.0;
      for (auto [c, w] : cols[static_cast<std::size_t>(j)]) acc += w * src[static_cast<std::size_t>(c)];
      dst[static_cast<std::size_t>(j)] = acc;
    }
  }

  const double half_cell = 0.5 * (static_cast<double>(mask.height()) / out.height) *
                           (static_cast<double>(mask.width()) / out.width);
  Mask result(out);
  for (int i = 0; i < out.height; ++i) {
    for (int j = 0; j < out.width; ++j) {
      double acc = 0.0;
      for (auto [r, w] : rows[static_cast<std::size_t>(i)]) acc += w * partial(r, j);
      result(i, j) = acc >= half_cell;
    }
  }
  return result;
}

/// 1 at the centre pixel falling to 0 at the corners.  The centre is pixel
/// (h/2, w/2), so for even sizes only the top-left corner reaches exactly 0.
inline Grid<double> radial_image(Extent size, RadialProfile profile = RadialProfile::linear) {
  if (size.height <= 0 || size.width <= 0) throw DomainError("radial_image: size must be positive");
  const auto cr = static_cast<double>(size.height / 2);
  const auto cc = static_cast<double>(size.width / 2);
  const double r_corner = std::hypot(cr, cc);
  Grid<double> img(size, 1.0);
  if (r_corner == 0.0) return img;
  for (int r = 0; r < size.height; ++r) {
    for (int c = 0; c < size.width; ++c) {
      const double t = std::hypot(r - cr, c - cc) / r_corner;
      const double v = profile == RadialProfile::linear ? 1.0 - t : 1.0 - t * t;
      img(r, c) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

inline NetworkInput build_input(const DepthExample& example, bool with_radial,
                                RadialProfile profile = RadialProfile::linear,
                                Extent size = {kNetworkInputSize, kNetworkInputSize}) {
  const CameraTrack& track = example.track;
  if (example.masks.size() != track.size())
    throw ValidationError("build_input: mask count does not match the camera track");
  const double range = track.range();
  if (!(range > 0.0)) throw ValidationError("build_input: degenerate track (z_n == z_1)");

  NetworkInput in;
  in.mask_stack.reserve(example.masks.size());
  for (const auto& m : example.masks) in.mask_stack.push_back(downsample(m, size));
  if (with_radial) in.radial_image = radial_image(size, profile);

  const std::size_t n = track.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double dz = track[i] - track.first();
    in.delta_z.push_back(dz);
    if (i + 1 < n) in.z_bar.push_back(dz / range);
  }
  return in;
}

inline LabelSet build_labels(const DepthExample& example) {
  const double range = example.track.range();
  if (!(range > 0.0)) throw ValidationError("build_labels: degenerate track (z_n == z_1)");
  const double d1 = example.d1;
  return {d1, d1 / range, d1 / (d1 + range)};
}

}  // namespace odms
