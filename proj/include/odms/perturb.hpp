#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <vector>

#include "odms/errors.hpp"
#include "odms/grid.hpp"
#include "odms/mask_synth.hpp"
#include "odms/rng.hpp"

namespace odms {

enum class MorphKind { none, dilate, erode };

/// Anything that yields standard-normal draws.
template <typename R>
concept NormalSource = requires(R& r) {
  { r.normal() } -> std::convertible_to<double>;
};

struct PerturbDraw {
  double p = 0.0;
  int iterations = 0;
  MorphKind kind = MorphKind::none;

  /// Sign picks dilation or erosion, rounded magnitude the iteration count.
  static PerturbDraw from(double p) noexcept {
    PerturbDraw d;
    d.p = p;
    d.iterations = static_cast<int>(std::floor(std::abs(p) + 0.5));
    d.kind = d.iterations == 0 ? MorphKind::none : (p >= 0.0 ? MorphKind::dilate : MorphKind::erode);
    return d;
  }
};

/// Iterated binary dilation or erosion with the 4-connected 3x3 cross.
/// Pixels outside the image are background.
inline Mask morph(const Mask& mask, MorphKind kind, int iterations) {
  if (kind == MorphKind::none || iterations <= 0 || mask.empty()) return mask;

  const int h = mask.height(), w = mask.width();
  const int pw = w + 2;
  // one-pixel background frame so neighbour reads need no bounds checks
  std::vector<std::uint8_t> cur(static_cast<std::size_t>(h + 2) * pw, 0);
  std::vector<std::uint8_t> next(cur.size(), 0);
  for (int r = 0; r < h; ++r) {
    auto src = mask.row(r);
    for (int c = 0; c < w; ++c) cur[static_cast<std::size_t>(r + 1) * pw + c + 1] = src[c] != 0;
  }

  const bool dilate = kind == MorphKind::dilate;
  for (int it = 0; it < iterations; ++it) {
    for (int r = 1; r <= h; ++r) {
      const std::uint8_t* up = &cur[static_cast<std::size_t>(r - 1) * pw];
      const std::uint8_t* mid = &cur[static_cast<std::size_t>(r) * pw];
      const std::uint8_t* down = &cur[static_cast<std::size_t>(r + 1) * pw];
      std::uint8_t* out = &next[static_cast<std::size_t>(r) * pw];
      for (int c = 1; c <= w; ++c) {
        out[c] = dilate ? (mid[c] | mid[c - 1] | mid[c + 1] | up[c] | down[c])
                        : (mid[c] & mid[c - 1] & mid[c + 1] & up[c] & down[c]);
      }
    }
    cur.swap(next);
  }

  Mask result(h, w);
  for (int r = 0; r < h; ++r) {
    auto dst = result.row(r);
    for (int c = 0; c < w; ++c) dst[c] = cur[static_cast<std::size_t>(r + 1) * pw + c + 1];
  }
  return result;
}

inline Mask apply(const Mask& mask, const PerturbDraw& draw) {
  return morph(mask, draw.kind, draw.iterations);
}

/// Independent draw per mask; track and labels are untouched.
template <NormalSource Rng>
DepthExample perturb_example(DepthExample example, Rng& rng) {
  if (example.perturbed) throw ValidationError("perturb_example: example is already perturbed");
  for (auto& m : example.masks) m = apply(m, PerturbDraw::from(rng.normal()));
  example.perturbed = true;
  return example;
}

/// Perturbation of example `index` under `seed`, independent of every other
/// example.
inline DepthExample perturb_example(DepthExample example, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index, StreamPurpose::perturb);
  return perturb_example(std::move(example), rng);
}

}  // namespace odms
