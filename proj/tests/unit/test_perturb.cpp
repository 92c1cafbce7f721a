#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>

#include "odms/mask_synth.hpp"
#include "odms/perturb.hpp"
#include "oracles/naive_morph.hpp"

using namespace odms;

namespace {

Mask random_mask(std::mt19937_64& gen, int h, int w, int margin = 0) {
  std::uniform_real_distribution<double> density(0.05, 0.7), u(0, 1);
  const double p = density(gen);
  Mask m(h, w);
  for (int r = margin; r < h - margin; ++r)
    for (int c = margin; c < w - margin; ++c) m(r, c) = u(gen) < p;
  return m;
}

oracle::Image to_image(const Mask& m) {
  oracle::Image img(static_cast<std::size_t>(m.height()), std::vector<int>(static_cast<std::size_t>(m.width())));
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c) img[r][c] = m(r, c);
  return img;
}

bool subset(const Mask& a, const Mask& b) {
  for (int r = 0; r < a.height(); ++r)
    for (int c = 0; c < a.width(); ++c)
      if (a(r, c) && !b(r, c)) return false;
  return true;
}

struct FixedNormals {
  std::vector<double> values;
  std::size_t next = 0;
  double normal() { return values[next++ % values.size()]; }
};
static_assert(NormalSource<FixedNormals>);

}  // namespace

TEST(PerturbDraw, RoundingAndKind) {
  EXPECT_EQ(PerturbDraw::from(0.0).kind, MorphKind::none);
  EXPECT_EQ(PerturbDraw::from(0.49).iterations, 0);
  EXPECT_EQ(PerturbDraw::from(-0.49).kind, MorphKind::none);
  EXPECT_EQ(PerturbDraw::from(0.5).iterations, 1);
  EXPECT_EQ(PerturbDraw::from(0.5).kind, MorphKind::dilate);
  EXPECT_EQ(PerturbDraw::from(-0.5).iterations, 1);
  EXPECT_EQ(PerturbDraw::from(-0.5).kind, MorphKind::erode);
  EXPECT_EQ(PerturbDraw::from(-2.7).iterations, 3);
  EXPECT_EQ(PerturbDraw::from(1.49).iterations, 1);
}

TEST(Morph, ZeroIterationsIsIdentity) {
  std::mt19937_64 gen(1);
  const Mask m = random_mask(gen, 20, 30);
  EXPECT_EQ(morph(m, MorphKind::dilate, 0), m);
  EXPECT_EQ(morph(m, MorphKind::erode, 0), m);
  EXPECT_EQ(morph(m, MorphKind::none, 5), m);
}

TEST(Morph, SinglePixelDilatesToCross) {
  Mask m(9, 9);
  m(4, 4) = 1;
  const Mask d = morph(m, MorphKind::dilate, 1);
  EXPECT_EQ(pixel_area(d), 5u);
  EXPECT_TRUE(d(3, 4) && d(5, 4) && d(4, 3) && d(4, 5) && d(4, 4));
  EXPECT_EQ(pixel_area(morph(m, MorphKind::dilate, 2)), 13u);
  EXPECT_EQ(pixel_area(morph(d, MorphKind::erode, 1)), 1u);
}

TEST(Morph, BordersAreBackground) {
  Mask full(6, 6, 1);
  const Mask e = morph(full, MorphKind::erode, 1);
  EXPECT_EQ(pixel_area(e), 16u);
  EXPECT_EQ(pixel_area(morph(full, MorphKind::erode, 3)), 0u);
  Mask corner(5, 5);
  corner(0, 0) = 1;
  EXPECT_EQ(pixel_area(morph(corner, MorphKind::dilate, 1)), 3u);
}

TEST(Morph, MatchesNaiveReference) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Mask m = random_mask(gen, 64, 64);
    for (int it = 0; it <= 3; ++it) {
      for (bool dil : {true, false}) {
        const Mask got = morph(m, dil ? MorphKind::dilate : MorphKind::erode, it);
        ASSERT_EQ(to_image(got), oracle::morph(to_image(m), dil, it)) << "trial " << trial << " it " << it;
      }
    }
  }
}

TEST(Morph, ClosingContainsOpening) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Mask m = random_mask(gen, 40, 50, 4);
    for (int k = 1; k <= 3; ++k) {
      const Mask closing = morph(morph(m, MorphKind::dilate, k), MorphKind::erode, k);
      const Mask opening = morph(morph(m, MorphKind::erode, k), MorphKind::dilate, k);
      EXPECT_EQ(to_image(closing), oracle::morph(oracle::morph(to_image(m), true, k), false, k));
      EXPECT_TRUE(subset(opening, m));
      EXPECT_TRUE(subset(m, closing));
      EXPECT_TRUE(subset(opening, closing));
    }
  }
}

TEST(Morph, DilationGrowsErosionShrinks) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Mask m = random_mask(gen, 32, 32);
    for (int it = 1; it <= 3; ++it) {
      EXPECT_TRUE(subset(m, morph(m, MorphKind::dilate, it)));
      EXPECT_TRUE(subset(morph(m, MorphKind::erode, it), m));
    }
  }
}

TEST(PerturbExample, SmallDrawsLeaveMasksUnchanged) {
  const auto ex = generate_example(GenConfig{}, 0);
  FixedNormals rng{{0.1, -0.3, 0.49, -0.49, 0.0}};
  const auto out = perturb_example(ex, rng);
  EXPECT_EQ(out.masks, ex.masks);
  EXPECT_TRUE(out.perturbed);
}

TEST(PerturbExample, PreservesTrackAndLabels) {
  const auto ex = generate_example(GenConfig{}, 1);
  const auto out = perturb_example(ex, 5, 1);
  EXPECT_EQ(out.track, ex.track);
  EXPECT_EQ(std::bit_cast<std::uint64_t>(out.d1), std::bit_cast<std::uint64_t>(ex.d1));
  EXPECT_EQ(std::bit_cast<std::uint64_t>(out.ell_ratio), std::bit_cast<std::uint64_t>(ex.ell_ratio));
  EXPECT_EQ(out.object, ex.object);
  EXPECT_NE(out.masks, ex.masks);
  for (const auto& m : out.masks) EXPECT_TRUE(is_binary(m));
}

TEST(PerturbExample, IndependentDrawPerMask) {
  const auto ex = generate_example(GenConfig{}, 2);
  FixedNormals rng{{1.0, -1.0, 0.0}};
  const auto out = perturb_example(ex, rng);
  for (std::size_t i = 0; i < ex.masks.size(); ++i) {
    const MorphKind kind = i % 3 == 0 ? MorphKind::dilate : i % 3 == 1 ? MorphKind::erode : MorphKind::none;
    EXPECT_EQ(out.masks[i], morph(ex.masks[i], kind, 1)) << "mask " << i;
  }
}

TEST(PerturbExample, DeterministicAndRejectsDoublePerturb) {
  const auto ex = generate_example(GenConfig{}, 3);
  const auto a = perturb_example(ex, 9, 3);
  EXPECT_EQ(a, perturb_example(ex, 9, 3));
  EXPECT_THROW(perturb_example(a, 9, 3), ValidationError);
}

TEST(PerturbDraw, ZeroIterationFrequency) {
  CounterRng rng(11, 0, StreamPurpose::perturb);
  constexpr int kDraws = 100000;
  int zero = 0;
  for (int i = 0; i < kDraws; ++i) zero += PerturbDraw::from(rng.normal()).iterations == 0;
  const double expected = std::erf(0.5 / std::sqrt(2.0));  // P(|p| < 0.5)
  EXPECT_NEAR(expected, 0.3829, 1e-4);
  EXPECT_NEAR(static_cast<double>(zero) / kDraws, expected, 0.01);
}
