#pragma once

// Synthetic object-depth examples: a random object silhouette scaled for a
// random camera track and rasterised into one binary mask per pose.  The
// object sits at z_object = 0, so the ground-truth depth is d1 = z_1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ranges>
#include <string>
#include <vector>

#include "odms/contour.hpp"
#include "odms/errors.hpp"
#include "odms/geometry.hpp"
#include "odms/grid.hpp"
#include "odms/raster.hpp"
#include "odms/rng.hpp"

namespace odms {

inline constexpr int kBezierSegments = 32;
inline constexpr int kMaxObjectAttempts = 100;

struct GenConfig {
  double d_min = 0.1;
  double d_max = 0.7;
  double delta_z_min = 0.1;
  int n_obs = 10;
  Extent canvas{480, 640};
  std::vector<int> s_p_choices{100, 200, 300, 400};
  std::vector<int> n_p_choices{3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> r_b_choices{0.01, 0.05, 0.2, 0.5};
  std::vector<double> rho_b_choices{0.01, 0.05, 0.2};
  std::uint64_t seed = 0;

  void validate() const {
    if (!(d_min > 0.0)) throw ValidationError("config: d_min must be positive");
    if (!(delta_z_min > 0.0)) throw ValidationError("config: delta_z_min must be positive");
    if (!(d_max > d_min + delta_z_min))
      throw ValidationError("config: d_max must exceed d_min + delta_z_min");
    if (n_obs < 2) throw ValidationError("config: n_obs must be at least 2");
    if (canvas.height <= 0 || canvas.width <= 0)
      throw ValidationError("config: canvas must be positive");
    if (s_p_choices.empty() || n_p_choices.empty() || r_b_choices.empty() || rho_b_choices.empty())
      throw ValidationError("config: empty choice list");
    const int fit = std::min(canvas.height, canvas.width);
    for (int s : s_p_choices)
      if (s <= 0 || s > fit)
        throw ValidationError("config: s_p " + std::to_string(s) + " does not fit the canvas");
    for (int n : n_p_choices)
      if (n < 3) throw ValidationError("config: n_p must be at least 3");
    for (double r : r_b_choices)
      if (!(r >= 0.0)) throw ValidationError("config: r_B must be non-negative");
    for (double r : rho_b_choices)
      if (!(r >= 0.0)) throw ValidationError("config: rho_B must be non-negative");
  }

  friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

struct ObjectSpec {
  int s_p = 0;
  int n_p = 0;
  double r_b = 0.0;
  double rho_b = 0.0;
  std::vector<Point2> anchors;  // ordered by polar angle about their centroid
  std::vector<Point2> contour;  // closed: front() == back()

  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

struct DepthExample {
  CameraTrack track;
  std::vector<Mask> masks;  // masks[i] observed at track[i]
  double d1 = 0.0;
  double ell_ratio = 0.0;  // l_n / l_1 = d1 / d_n
  std::optional<ObjectSpec> object;
  bool perturbed = false;

  friend bool operator==(const DepthExample&, const DepthExample&) = default;
};

inline CameraTrack sample_track(const GenConfig& config, CounterRng& rng) {
  const double z1 = rng.uniform(config.d_min, config.d_max - config.delta_z_min);
  const double zn = rng.uniform(z1 + config.delta_z_min, config.d_max);
  std::vector<double> z{z1, zn};
  z.reserve(static_cast<std::size_t>(config.n_obs));
  while (z.size() < static_cast<std::size_t>(config.n_obs)) {
    const double zi = rng.uniform(z1, zn);
    const bool clash = std::ranges::any_of(
        z, [zi](double other) { return std::abs(other - zi) < kPositionTolerance; });
    if (!clash) z.push_back(zi);
  }
  std::ranges::sort(z);
  return CameraTrack(std::move(z));
}

namespace detail {

inline bool degenerate_anchors(const std::vector<Point2>& ordered, double s_p) {
  const double min_sep = 1e-6 * s_p;
  for (std::size_t i = 0; i < ordered.size(); ++i)
    for (std::size_t j = i + 1; j < ordered.size(); ++j)
      if (norm(ordered[i] - ordered[j]) < min_sep) return true;
  return polygon_area(ordered) < 1e-6 * s_p * s_p;
}

inline std::vector<Point2> order_by_polar_angle(std::vector<Point2> pts) {
  Point2 centroid{};
  for (auto p : pts) centroid = centroid + p;
  centroid = (1.0 / static_cast<double>(pts.size())) * centroid;
  std::ranges::sort(pts, {}, [centroid](Point2 p) {
    return std::atan2(p.y - centroid.y, p.x - centroid.x);
  });
  return pts;
}

}  // namespace detail

/// Closed contour through ordered anchors: one cubic Bezier per adjacent
/// pair, interior control points at radius r_b * |p_j - p_i| from their end
/// point, rotated atan(rho_b) off the chord towards the outside of the
/// anchor polygon.
inline std::vector<Point2> bezier_contour(const std::vector<Point2>& anchors, double r_b,
                                          double rho_b, int segments = kBezierSegments) {
  Point2 centroid{};
  for (auto p : anchors) centroid = centroid + p;
  centroid = (1.0 / static_cast<double>(anchors.size())) * centroid;

  const double theta = std::atan(rho_b);
  const double cs = std::cos(theta), sn = std::sin(theta);

  std::vector<Point2> contour;
  contour.reserve(anchors.size() * static_cast<std::size_t>(segments) + 1);
  contour.push_back(anchors.front());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Point2 pi = anchors[i];
    const Point2 pj = anchors[(i + 1) % anchors.size()];
    const double len = norm(pj - pi);
    const Point2 u = (1.0 / len) * (pj - pi);
    Point2 out{-u.y, u.x};
    if (dot(out, 0.5 * (pi + pj) - centroid) < 0.0) out = -1.0 * out;
    const double radius = r_b * len;
    const CubicBezier curve{pi, pi + radius * (cs * u + sn * out),
                            pj + radius * (-cs * u + sn * out), pj};
    flatten_into(curve, segments, contour);
  }
  return contour;
}

inline ObjectSpec sample_object(const GenConfig& config, CounterRng& rng) {
  ObjectSpec obj;
  obj.s_p = config.s_p_choices[rng.index(config.s_p_choices.size())];
  obj.n_p = config.n_p_choices[rng.index(config.n_p_choices.size())];
  obj.r_b = config.r_b_choices[rng.index(config.r_b_choices.size())];
  obj.rho_b = config.rho_b_choices[rng.index(config.rho_b_choices.size())];

  const double side = obj.s_p;
  for (int attempt = 0; attempt < kMaxObjectAttempts; ++attempt) {
    std::vector<Point2> pts(static_cast<std::size_t>(obj.n_p));
    for (auto& p : pts) {
      p.x = rng.uniform(0.0, side);
      p.y = rng.uniform(0.0, side);
    }
    pts = detail::order_by_polar_angle(std::move(pts));
    if (detail::degenerate_anchors(pts, side)) continue;

    auto contour = bezier_contour(pts, obj.r_b, obj.rho_b);
    // Curved edges can bulge past the anchor box; the full-scale silhouette
    // must still fit on the canvas.
    const Box box = bounding_box(contour);
    if (box.width() > config.canvas.width || box.height() > config.canvas.height) continue;

    obj.anchors = std::move(pts);
    obj.contour = std::move(contour);
    return obj;
  }
  throw SingularConfiguration("sample_object: no valid contour after " +
                              std::to_string(kMaxObjectAttempts) + " attempts");
}

struct RenderedMask {
  Mask mask;
  bool empty = false;  // object covered no pixel centre at this scale
};

/// Scales the contour by `scale` about its bounding-box centre, centres the
/// scaled box on the canvas and fills it.
inline RenderedMask render_mask(const ObjectSpec& object, double scale, Extent canvas) {
  if (!(scale > 0.0 && scale <= 1.0)) throw DomainError("render_mask: scale must lie in (0, 1]");
  const Box box = bounding_box(object.contour);
  if (box.width() * scale > canvas.width || box.height() * scale > canvas.height)
    throw DomainError("render_mask: scaled object exceeds the canvas");

  const Point2 from = box.center();
  const Point2 to{0.5 * canvas.width, 0.5 * canvas.height};
  std::vector<Point2> poly;
  poly.reserve(object.contour.size());
  for (auto p : object.contour) poly.push_back(to + scale * (p - from));

  RenderedMask out{Mask(canvas), false};
  fill_polygon(out.mask, poly);
  out.empty = pixel_area(out.mask) == 0;
  return out;
}

/// Example `index` of the stream seeded by config.seed.
inline DepthExample generate_example(const GenConfig& config, std::uint64_t index) {
  CounterRng track_rng(config.seed, index, StreamPurpose::track);
  CounterRng object_rng(config.seed, index, StreamPurpose::object);

  DepthExample ex;
  ex.track = sample_track(config, track_rng);
  ex.object = sample_object(config, object_rng);
  ex.masks.reserve(ex.track.size());
  for (double z : ex.track.positions())
    ex.masks.push_back(render_mask(*ex.object, config.d_min / z, config.canvas).mask);
  ex.d1 = ex.track.first();
  ex.ell_ratio = ex.track.first() / ex.track.last();
  return ex;
}

/// Lazy view of examples 0, 1, 2, ...; element k depends only on
/// (config, k).
inline auto generate_stream(GenConfig config) {
  config.validate();
  return std::views::iota(std::uint64_t{0}) |
         std::views::transform([config = std::move(config)](std::uint64_t k) {
           return generate_example(config, k);
         });
}

inline auto generate_stream(GenConfig config, std::uint64_t count) {
  return generate_stream(std::move(config)) | std::views::take(count);
}

}  // namespace odms
