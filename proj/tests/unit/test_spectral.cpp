#include <besovlab/errors.hpp>
#include <besovlab/field.hpp>
#include <besovlab/spectral.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace besovlab;

namespace {
const Grid kGrid(std::numbers::pi, 64);
}

TEST(Multiplier, DerivativeEigenfunctions) {
  for (int m : {1, 3, 7, 20}) {
    const Field f = Field::sample(kGrid, [m](double x) { return std::sin(m * x); });
    const Field expected = Field::sample(kGrid, [m](double x) { return m * std::cos(m * x); });
    EXPECT_LT(max_abs_difference(derivative(f), expected), 1e-12 * m);
  }
}

TEST(Multiplier, HelmholtzEigenfunctions) {
  for (int m : {0, 2, 5}) {
    const Field f = Field::sample(kGrid, [m](double x) { return std::cos(m * x); });
    const Field g = apply_multiplier(f, Multiplier::helmholtz_inverse(kGrid));
    EXPECT_LT(max_abs_difference(g, (1.0 / (1.0 + m * m)) * f), 1e-14);
  }
}

TEST(Multiplier, NyquistModeHasZeroDerivative) {
  const Field f = Field::sample(kGrid, [](double x) { return std::cos(32.0 * x); });
  EXPECT_LT(max_abs(derivative(f)), 1e-12);
}

TEST(Multiplier, AntiderivativeInvertsDerivativeOffMean) {
  const Field f = Field::sample(kGrid, [](double x) { return std::sin(x) + 0.5 * std::cos(4 * x); });
  const Field back = apply_multiplier(derivative(f), Multiplier::antiderivative(kGrid));
  EXPECT_LT(max_abs_difference(back, f), 1e-13);
}

TEST(Multiplier, BandStoresOnlyItsSupport) {
  const Multiplier m = Multiplier::band(kGrid, 4.0, 9.5, [](double) { return 1.0; });
  EXPECT_EQ(m.first(), 4u);
  EXPECT_EQ(m.last(), 10u);
  EXPECT_EQ(m.gain(3), std::complex<double>{});
  EXPECT_EQ(m.gain(9), std::complex<double>(1.0));
  const Field f = Field::sample(kGrid, [](double x) { return std::sin(2 * x) + std::sin(6 * x) + std::sin(12 * x); });
  const Field expected = Field::sample(kGrid, [](double x) { return std::sin(6 * x); });
  EXPECT_LT(max_abs_difference(apply_multiplier(f, m), expected), 1e-14);
}

TEST(Multiplier, IdentityAndGridMismatch) {
  const Field f = Field::sample(kGrid, [](double x) { return std::exp(std::sin(x)); });
  EXPECT_LT(max_abs_difference(apply_multiplier(f, Multiplier::identity(kGrid)), f), 1e-15);
  const Grid other(2.0, 64);
  EXPECT_THROW(apply_multiplier(f, Multiplier::identity(other)), InvalidArgument);
}

TEST(Dealias, CutoffIndex) {
  EXPECT_EQ(dealias_cutoff(1024, 2.0 / 3.0), 341u);
  EXPECT_EQ(dealias_cutoff(1024, 0.5), 256u);
  EXPECT_EQ(dealias_cutoff(64, 1.0), 32u);
  const Field f = Field::sample(kGrid, [](double x) { return std::sin(3 * x) + std::sin(30 * x); });
  const Field expected = Field::sample(kGrid, [](double x) { return std::sin(3 * x); });
  EXPECT_LT(max_abs_difference(dealias(f, 2.0 / 3.0), expected), 1e-13);
}

TEST(Spectrum, TopThirdEnergyFraction) {
  const Field low = Field::sample(kGrid, [](double x) { return std::sin(4 * x); });
  const Field high = Field::sample(kGrid, [](double x) { return std::sin(25 * x); });
  EXPECT_LT(top_third_energy_fraction(to_spectrum(low)), 1e-28);
  EXPECT_NEAR(top_third_energy_fraction(to_spectrum(high)), 1.0, 1e-14);
  EXPECT_NEAR(top_third_energy_fraction(to_spectrum(low + high)), 0.5, 1e-14);
}
