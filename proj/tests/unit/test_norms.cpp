#include <besovlab/cutoffs.hpp>
#include <besovlab/errors.hpp>
#include <besovlab/norms.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace besovlab;

namespace {

const Grid kGrid(16 * std::numbers::pi, 2048);

Field smooth_random(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  double a[8], b[8];
  for (int i = 0; i < 8; ++i) {
    a[i] = dist(rng);
    b[i] = dist(rng);
  }
  return Field::sample(kGrid, [&](double x) {
    double v = 0.0;
    for (int i = 0; i < 8; ++i) v += a[i] * std::cos((i + 1) * 0.7 * x) + b[i] * std::exp(-std::pow(x - 3 * i, 2));
    return v;
  });
}

}  // namespace

TEST(Lebesgue, ConstantsAndSup) {
  const Field c = Field::constant(kGrid, -2.0);
  const double length = 2 * kGrid.half_length();
  EXPECT_NEAR(lebesgue_norm(c, 1.0), 2.0 * length, 1e-10);
  EXPECT_NEAR(lebesgue_norm(c, 2.0), 2.0 * std::sqrt(length), 1e-12);
  EXPECT_EQ(lebesgue_norm(c, kInfinity), 2.0);
  EXPECT_THROW(lebesgue_norm(c, 0.5), InvalidArgument);
}

TEST(Blocks, ParsevalRouteMatchesPhysicalRoute) {
  const CutoffSystem cs = build_cutoffs(kGrid);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Field f = smooth_random(seed);
    const auto fast = block_norms(f, 2.0, cs);
    ASSERT_EQ(fast.size(), static_cast<std::size_t>(cs.max_block() + 2));
    for (int j = -1; j <= cs.max_block(); ++j) {
      const double slow = lebesgue_norm(lp_block(f, j, cs), 2.0);
      EXPECT_NEAR(fast[j + 1], slow, 1e-12 * (1.0 + slow)) << "j=" << j;
    }
  }
}

TEST(Blocks, SumOfBlocksReconstructs) {
  const CutoffSystem cs = build_cutoffs(kGrid);
  const Field f = smooth_random(9);
  Field sum = Field::zeros(kGrid);
  for (int j = -1; j <= cs.max_block(); ++j) sum = sum + lp_block(f, j, cs);
  EXPECT_LT(max_abs_difference(sum, f), 1e-12 * max_abs(f));
  EXPECT_EQ(max_abs(lp_block(f, -2, cs)), 0.0);
}

TEST(Blocks, PlateauFrequencyLivesInOneBlock) {
  const CutoffSystem cs = build_cutoffs(kGrid);
  // xi = 1.4375 * 2^3 sits on the plateau of block 3 only.
  const double xi = kGrid.frequency(std::round(1.4375 * 8 * kGrid.half_length() / std::numbers::pi));
  const Field f = Field::sample(kGrid, [xi](double x) { return std::sin(xi * x); });
  EXPECT_LT(max_abs_difference(lp_block(f, 3, cs), f), 1e-12);
  for (int j = -1; j <= cs.max_block(); ++j) {
    if (j != 3) EXPECT_LT(max_abs(lp_block(f, j, cs)), 1e-12) << "j=" << j;
  }
}

TEST(Besov, FromBlocks) {
  const std::vector<double> blocks{1.0, 2.0, 0.5};
  const double s = 1.5, r = 2.0;
  const double expected = std::sqrt(std::pow(std::exp2(-s) * 1.0, 2) + 4.0 + std::pow(std::exp2(s) * 0.5, 2));
  EXPECT_NEAR(besov_from_blocks(blocks, s, r), expected, 1e-15);
  EXPECT_NEAR(besov_from_blocks(blocks, 0.0, 1.0), 3.5, 1e-15);
}

TEST(Besov, ScalesLinearlyAndRejectsInfiniteR) {
  const CutoffSystem cs = build_cutoffs(kGrid);
  const Field f = smooth_random(4);
  const BesovIndex idx{1.2, 2.0, 2.0, {}};
  EXPECT_NEAR(besov_norm(-3.0 * f, idx, cs), 3.0 * besov_norm(f, idx, cs), 1e-12 * besov_norm(f, idx, cs));
  EXPECT_THROW(besov_norm(f, BesovIndex{1.2, 2.0, kInfinity, {}}, cs), UnsupportedConfiguration);
}

TEST(Besov, TriangleInequality) {
  const CutoffSystem cs = build_cutoffs(kGrid);
  for (double p : {1.0, 2.0, 3.0}) {
    const BesovIndex idx{1.2, p, 2.0, {}};
    const Field f = smooth_random(5), g = smooth_random(6);
    EXPECT_LE(besov_norm(f + g, idx, cs), besov_norm(f, idx, cs) + besov_norm(g, idx, cs) + 1e-12);
  }
}

TEST(Lipschitz, SumOfSupNorms) {
  const Grid g(std::numbers::pi, 256);
  const Field f = Field::sample(g, [](double x) { return 0.5 * std::sin(2 * x); });
  EXPECT_NEAR(lipschitz_norm(f), 1.5, 1e-12);
}
