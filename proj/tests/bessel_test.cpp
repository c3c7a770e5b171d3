#include <gtest/gtest.h>

#include <cmath>

#include "hyperfold/bessel.hpp"

namespace b = hyperfold::bessel;

TEST(Bessel, J1MatchesStandardLibrary) {
  for (double v = 0.0; v <= 40.0; v += 0.0625) {
    const auto e = b::j1(v);
    EXPECT_NEAR(e.value, std::cyl_bessel_j(1.0, v), 2e-12) << v;
    EXPECT_EQ(e.regime, v <= b::kSeriesLimit ? b::Regime::Series : b::Regime::Asymptotic);
  }
  EXPECT_EQ(b::j1(-2.0).value, -b::j1(2.0).value);
}

TEST(Bessel, GAtOrigin) {
  EXPECT_NEAR(b::G(0.0), 0.5, 1e-12);
  EXPECT_NEAR(b::gprime_over_v(0.0), -0.125, 1e-12);
  EXPECT_NEAR(b::gprime_over_v(1e-6), -0.125, 1e-12);
}

TEST(Bessel, GIsEvenAndContinuousAcrossRegimes) {
  for (double v : {0.1, 1.0, 7.0, 20.0}) EXPECT_EQ(b::G(v), b::G(-v));
  const double edge = b::kSmallArgLimit;
  EXPECT_NEAR(b::G(std::nextafter(edge, 0.0)), b::G(edge), 1e-14);
  EXPECT_NEAR(b::gprime_over_v(std::nextafter(edge, 0.0)), b::gprime_over_v(edge), 1e-13);
}

TEST(Bessel, GPrimeOverVMatchesDifferencedG) {
  for (double v : {0.3, 0.7, 2.0, 9.0, 13.0, 25.0}) {
    const double h = 1e-4;
    const double dG = (b::G(v - 2 * h) - 8 * b::G(v - h) + 8 * b::G(v + h) - b::G(v + 2 * h)) / (12 * h);
    EXPECT_NEAR(b::gprime_over_v(v), dG / v, 1e-9);
  }
}

TEST(Bessel, RegimesAgreeOnOverlap) {
  const auto rep = b::regime_overlap(10.0, 14.0, 2001);
  EXPECT_LE(rep.max_error, 1e-8);
}
