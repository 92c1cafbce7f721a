#pragma once

// Optical-expansion depth model.
//
// An object at fixed position z_object on the optical axis, seen from camera
// positions z_i, has depth d_i = z_i - z_object.  Projected scale is inversely
// proportional to depth and projected area to depth squared, so
//
//     d_i * sqrt(a_i) = c        for every observation i.
//
// Everything here is calibration free: positions only matter through their
// differences, areas only through their ratios.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "odms/errors.hpp"

namespace odms {

/// Camera positions closer than this are the same observation.
inline constexpr double kPositionTolerance = 1e-9;

/// Camera positions on the optical axis, ascending; front() is the pose
/// nearest the object.
class CameraTrack {
 public:
  CameraTrack() = default;
  explicit CameraTrack(std::vector<double> positions) : positions_(std::move(positions)) {
    if (positions_.size() < 2)
      throw ValidationError("camera track needs at least 2 positions");
    for (double z : positions_)
      if (!std::isfinite(z)) throw ValidationError("camera track: non-finite position");
    if (!std::is_sorted(positions_.begin(), positions_.end()))
      throw ValidationError("camera track: positions not sorted ascending");
    if (!(positions_.back() - positions_.front() > 0.0))
      throw ValidationError("camera track: degenerate (z_n == z_1)");
  }

  std::span<const double> positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  double operator[](std::size_t i) const noexcept { return positions_[i]; }
  double first() const noexcept { return positions_.front(); }
  double last() const noexcept { return positions_.back(); }
  double range() const noexcept { return last() - first(); }

  friend bool operator==(const CameraTrack&, const CameraTrack&) = default;

 private:
  std::vector<double> positions_;
};

/// Projected object areas, one per observation.
class AreaSeries {
 public:
  AreaSeries() = default;
  explicit AreaSeries(std::vector<double> areas) : areas_(std::move(areas)) {
    for (double a : areas_)
      if (!(a >= 0.0) || !std::isfinite(a))
        throw DomainError("area series: areas must be finite and non-negative");
  }

  std::span<const double> areas() const noexcept { return areas_; }
  std::size_t size() const noexcept { return areas_.size(); }
  double operator[](std::size_t i) const noexcept { return areas_[i]; }

 private:
  std::vector<double> areas_;
};

struct DepthSolution {
  double z_object = 0.0;
  double d1 = 0.0;  // z_1 - z_object
  std::optional<double> c;
};

/// sqrt(area_j) / sqrt(area_i), i.e. l_j / l_i = d_i / d_j.
inline double relative_scale(double area_i, double area_j) {
  if (!(area_i > 0.0)) throw DomainError("relative_scale: area_i must be positive");
  if (!(area_j >= 0.0)) throw DomainError("relative_scale: area_j must be non-negative");
  return std::sqrt(area_j) / std::sqrt(area_i);
}

/// Object position from two observations; depth reported at the smaller z.
inline DepthSolution solve_two_observation(double z_i, double z_j, double area_i, double area_j) {
  if (!(area_i > 0.0) || !(area_j > 0.0))
    throw DomainError("solve_two_observation: areas must be positive");
  if (std::abs(z_i - z_j) < kPositionTolerance)
    throw SingularConfiguration("solve_two_observation: identical camera positions");
  const double si = std::sqrt(area_i);
  const double sj = std::sqrt(area_j);
  if (si == sj) throw SingularConfiguration("solve_two_observation: identical areas");
  const double z_object = (z_i * si - z_j * sj) / (si - sj);
  return {z_object, std::min(z_i, z_j) - z_object, std::nullopt};
}

/// Least-squares fit of z_object * sqrt(a_i) + c = z_i * sqrt(a_i) over all
/// usable observations.  Rows with zero area and rows whose position
/// duplicates an earlier row are dropped.  Solved through the centred 2x2
/// normal equations in extended precision.
inline DepthSolution solve_least_squares(const CameraTrack& track, const AreaSeries& areas) {
  if (areas.size() != track.size())
    throw ValidationError("solve_least_squares: " + std::to_string(areas.size()) +
                          " areas for " + std::to_string(track.size()) + " positions");

  std::vector<std::pair<long double, long double>> rows;  // (sqrt a, z sqrt a)
  rows.reserve(track.size());
  double last_z = 0.0;
  for (std::size_t i = 0; i < track.size(); ++i) {
    if (!(areas[i] > 0.0)) continue;
    if (!rows.empty() && track[i] - last_z < kPositionTolerance) continue;
    const long double s = std::sqrt(static_cast<long double>(areas[i]));
    rows.emplace_back(s, static_cast<long double>(track[i]) * s);
    last_z = track[i];
  }
  if (rows.size() < 2)
    throw SingularConfiguration("solve_least_squares: fewer than 2 usable observations");

  const auto n = static_cast<long double>(rows.size());
  long double s_mean = 0, b_mean = 0, s_sq = 0;
  for (auto [s, b] : rows) {
    s_mean += s;
    b_mean += b;
    s_sq += s * s;
  }
  s_mean /= n;
  b_mean /= n;

  long double sxx = 0, sxb = 0;
  for (auto [s, b] : rows) {
    sxx += (s - s_mean) * (s - s_mean);
    sxb += (s - s_mean) * (b - b_mean);
  }
  // All usable areas equal: the design matrix has rank 1.
  if (!(sxx > 1e-24L * s_sq))
    throw SingularConfiguration("solve_least_squares: rank-deficient design (equal areas)");

  const long double z_object = sxb / sxx;
  const long double c = b_mean - z_object * s_mean;
  const auto z = static_cast<double>(z_object);
  return {z, track.first() - z, static_cast<double>(c)};
}

/// Depth from the predicted relative scale f = l_n / l_1 between the
/// farthest and nearest observation.
inline DepthSolution scale_to_depth(double z_first, double z_last, double f_scale) {
  if (!(f_scale > 0.0 && f_scale < 1.0))
    throw DomainError("scale_to_depth: relative scale must lie in (0, 1)");
  if (!(z_last > z_first)) throw DomainError("scale_to_depth: need z_last > z_first");
  const double z_object = (z_first - z_last * f_scale) / (1.0 - f_scale);
  return {z_object, z_first - z_object, std::nullopt};
}

/// Depth from a prediction normalised by the camera move range.
inline double normalized_depth_to_depth(double z_first, double z_last, double f_norm) {
  if (!(z_last > z_first)) throw DomainError("normalized_depth_to_depth: need z_last > z_first");
  return f_norm * (z_last - z_first);
}

}  // namespace odms
