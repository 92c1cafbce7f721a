#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "odms/featurize.hpp"
#include "odms/geometry.hpp"

using namespace odms;

namespace {

DepthExample toy_example(std::vector<double> z, double d1) {
  DepthExample ex;
  ex.track = CameraTrack(std::move(z));
  ex.masks.assign(ex.track.size(), Mask(48, 64));
  ex.d1 = d1;
  ex.ell_ratio = d1 / (d1 + ex.track.range());
  return ex;
}

}  // namespace

TEST(BuildInput, RelativeDistanceExample) {
  const auto in = build_input(toy_example({1, 2, 3, 4}, 1), false);
  ASSERT_EQ(in.z_bar.size(), 2u);
  EXPECT_DOUBLE_EQ(in.z_bar[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(in.z_bar[1], 2.0 / 3.0);
  EXPECT_EQ(in.delta_z, (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(in.mask_stack.size(), 4u);
  EXPECT_EQ(in.mask_stack[0].extent(), (Extent{112, 112}));
  EXPECT_FALSE(in.radial_image.has_value());
}

TEST(BuildInput, TwoObservations) {
  const auto in = build_input(toy_example({0.25, 0.75}, 0.25), true);
  EXPECT_TRUE(in.z_bar.empty());
  EXPECT_EQ(in.delta_z, (std::vector<double>{0.5}));
  ASSERT_TRUE(in.radial_image.has_value());
}

TEST(BuildInput, ZBarExactUnderMillimetreScaling) {
  const auto m = build_input(toy_example({1, 2, 3, 4}, 1), false);
  const auto mm = build_input(toy_example({1000, 2000, 3000, 4000}, 1000), false);
  EXPECT_EQ(m.z_bar, mm.z_bar);  // bitwise
}

TEST(BuildInput, ZBarInvariantUnderScaling) {
  const GenConfig cfg;
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> kd(1e-3, 1e3);
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto ex = generate_example(cfg, i);
    const auto base = build_input(ex, false);
    for (double k : {1000.0, kd(gen)}) {
      std::vector<double> z(ex.track.positions().begin(), ex.track.positions().end());
      for (auto& v : z) v *= k;
      auto scaled = ex;
      scaled.track = CameraTrack(z);
      scaled.d1 = ex.d1 * k;
      const auto in = build_input(scaled, false);
      ASSERT_EQ(in.z_bar.size(), base.z_bar.size());
      for (std::size_t j = 0; j < in.z_bar.size(); ++j)
        ASSERT_NEAR(in.z_bar[j], base.z_bar[j], 1e-13);
      const auto a = build_labels(ex), b = build_labels(scaled);
      EXPECT_NEAR(b.rel_scale, a.rel_scale, 1e-13);
      EXPECT_NEAR(b.norm_depth, a.norm_depth, 1e-12 * a.norm_depth);
      EXPECT_NEAR(b.depth, k * a.depth, 1e-12 * k * a.depth);
    }
  }
}

TEST(BuildInput, InvariantsOnGeneratedExamples) {
  const GenConfig cfg;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto ex = generate_example(cfg, i);
    const auto in = build_input(ex, false);
    for (std::size_t j = 0; j < in.z_bar.size(); ++j) {
      EXPECT_GT(in.z_bar[j], 0.0);
      EXPECT_LT(in.z_bar[j], 1.0);
      if (j) {
        EXPECT_GT(in.z_bar[j], in.z_bar[j - 1]);
      }
    }
    for (std::size_t j = 1; j < in.delta_z.size(); ++j) EXPECT_GT(in.delta_z[j], in.delta_z[j - 1]);
    EXPECT_DOUBLE_EQ(in.delta_z.back(), ex.track.last() - ex.track.first());
    for (const auto& m : in.mask_stack) EXPECT_TRUE(is_binary(m));
  }
}

TEST(BuildInput, RejectsBadInputs) {
  EXPECT_THROW(toy_example({3, 2, 1}, 1), ValidationError);  // unsorted tracks cannot be built
  auto ex = toy_example({1, 2, 3}, 1);
  ex.masks.pop_back();
  EXPECT_THROW(build_input(ex, false), ValidationError);
}

TEST(Downsample, AreaFidelityOnGeneratedMasks) {
  const GenConfig cfg;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto ex = generate_example(cfg, i);
    for (const auto& m : ex.masks) {
      const double src = static_cast<double>(pixel_area(m)) / (480.0 * 640.0);
      const double dst = static_cast<double>(pixel_area(downsample(m, {112, 112}))) / (112.0 * 112.0);
      ASSERT_NEAR(dst, src, 0.03) << "example " << i;
    }
  }
}

TEST(Downsample, IntegerRatioIsMajorityVote) {
  Mask m(4, 4);
  // top-left 2x2 block: 2 of 4 set -> foreground; top-right: 1 of 4 -> background
  m(0, 0) = m(1, 1) = 1;
  m(0, 2) = 1;
  m(2, 0) = m(2, 1) = m(3, 0) = m(3, 1) = 1;
  const Mask d = downsample(m, {2, 2});
  EXPECT_EQ(d(0, 0), 1);
  EXPECT_EQ(d(0, 1), 0);
  EXPECT_EQ(d(1, 0), 1);
  EXPECT_EQ(d(1, 1), 0);
}

TEST(BuildLabels, Example) {
  const auto labels = build_labels(toy_example({0.1, 0.3, 0.5}, 0.1));
  EXPECT_DOUBLE_EQ(labels.depth, 0.1);
  EXPECT_NEAR(labels.norm_depth, 0.25, 1e-15);
  EXPECT_NEAR(labels.rel_scale, 0.2, 1e-15);
}

TEST(BuildLabels, InverseConsistency) {
  const GenConfig cfg;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto ex = generate_example(cfg, i);
    const auto l = build_labels(ex);
    EXPECT_NEAR(l.rel_scale, ex.ell_ratio, 1e-9);
    EXPECT_NEAR(scale_to_depth(ex.track.first(), ex.track.last(), l.rel_scale).d1, ex.d1, 1e-9);
    EXPECT_NEAR(normalized_depth_to_depth(ex.track.first(), ex.track.last(), l.norm_depth), ex.d1, 1e-12);
  }
}

TEST(RadialImage, CentreCornersAndMidpoint) {
  const auto img = radial_image({112, 112});
  EXPECT_DOUBLE_EQ(img(56, 56), 1.0);
  EXPECT_DOUBLE_EQ(img(0, 0), 0.0);
  // other corners sit within one pixel of the corner distance
  const double px = 1.0 / std::hypot(56.0, 56.0);
  EXPECT_NEAR(img(0, 111), 0.0, 1.5 * px);
  EXPECT_NEAR(img(111, 0), 0.0, 1.5 * px);
  EXPECT_NEAR(img(111, 111), 0.0, 1.5 * px);
  EXPECT_NEAR(img(28, 28), 0.5, px);
  EXPECT_NEAR(img(84, 84), 0.5, px);
}

TEST(RadialImage, RangeAndMonotone) {
  const auto img = radial_image({112, 112});
  for (int r = 0; r < 112; ++r)
    for (int c = 0; c < 112; ++c) {
      ASSERT_GE(img(r, c), 0.0);
      ASSERT_LE(img(r, c), 1.0);
    }
  // along the diagonal and the horizontal axis away from the centre
  for (int k = 56; k > 0; --k) {
    EXPECT_LT(img(k - 1, k - 1), img(k, k));
    EXPECT_LT(img(56, k - 1), img(56, k));
  }
}

TEST(RadialImage, QuadraticProfileKeepsEndpoints) {
  const auto img = radial_image({112, 112}, RadialProfile::quadratic);
  EXPECT_DOUBLE_EQ(img(56, 56), 1.0);
  EXPECT_DOUBLE_EQ(img(0, 0), 0.0);
  EXPECT_NEAR(img(28, 28), 0.75, 0.02);
  EXPECT_THROW(radial_image({0, 5}), DomainError);
}
