#include <gtest/gtest.h>

#include <cmath>

#include "si_euler/core/fold.hpp"

using si_euler::ConfigError;
using si_euler::SymmetryFold;
using si_euler::symmetry_constants;

TEST(SymmetryFold, ConstantsAtFour) {
  const SymmetryFold f = symmetry_constants(4);
  EXPECT_NEAR(f.amplitude(), si_euler::pi / 8.0, 1e-15);
  EXPECT_NEAR(f.offset(), 0.0, 1e-15);
}

TEST(SymmetryFold, OffsetSigns) {
  EXPECT_NEAR(symmetry_constants(3).offset(), -7.0 / 20.0, 1e-15);
  EXPECT_NEAR(symmetry_constants(5).offset(), 3.0 / 28.0, 1e-15);
  EXPECT_LT(symmetry_constants(3).offset(), 0.0);
  for (int m = 5; m <= 12; ++m) EXPECT_GT(symmetry_constants(m).offset(), 0.0) << m;
}

TEST(SymmetryFold, AmplitudePositive) {
  for (int m = 3; m <= 12; ++m) {
    const SymmetryFold f(m);
    EXPECT_GT(f.amplitude(), 0.0);
    EXPECT_NEAR(f.amplitude(), 3.0 * si_euler::pi / (2.0 * (m * m - 4.0)), 1e-15);
  }
}

TEST(SymmetryFold, RejectsSmallM) {
  EXPECT_THROW(SymmetryFold(2), ConfigError);
  EXPECT_THROW(SymmetryFold(1), ConfigError);
  EXPECT_THROW(SymmetryFold(-4), ConfigError);
}

TEST(SymmetryFold, DomainAndWrap) {
  const SymmetryFold f(4);
  EXPECT_DOUBLE_EQ(f.period(), si_euler::pi / 2.0);
  EXPECT_DOUBLE_EQ(f.domain_start(), -si_euler::pi / 4.0);
  EXPECT_NEAR(f.wrap(si_euler::pi / 4.0), -si_euler::pi / 4.0, 1e-15);
  EXPECT_NEAR(f.wrap(0.1 + 3.0 * f.period()), 0.1, 1e-14);
  EXPECT_NEAR(f.wrap(0.1 - 5.0 * f.period()), 0.1, 1e-14);
  EXPECT_FALSE(SymmetryFold(3).forcing_signed());
  EXPECT_TRUE(SymmetryFold(4).forcing_signed());
}
