#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperfold/geometry.hpp"
#include "oracles.hpp"

namespace g = hyperfold::geometry;

TEST(Geometry, DistanceIsSymmetricAndMatchesDirectFormula) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0), h(0.1, 3.0);
  for (int k = 0; k < 1000; ++k) {
    const g::Point3 p{u(rng), u(rng), h(rng)}, q{u(rng), u(rng), h(rng)};
    const double d = g::distance3(p, q);
    EXPECT_EQ(d, g::distance3(q, p));
    const double num = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) + (p.z - q.z) * (p.z - q.z);
    EXPECT_NEAR(d, std::acosh(1.0 + num / (2.0 * p.z * q.z)), 1e-12 * std::max(1.0, d));
  }
}

TEST(Geometry, NonPositiveHeightThrows) {
  EXPECT_THROW(g::distance3({0, 0, 0}, {0, 0, 1}), std::domain_error);
  EXPECT_THROW(g::dist_to_axis({1, 0, -1}), std::domain_error);
}

TEST(Geometry, GeodesicsAreUnitSpeed) {
  const g::CircleGeodesic circle(0.7, 1.3, 1.1);
  for (double s0 : {-2.0, -0.3, 0.0, 0.8, 2.5})
    for (double ds : {0.01, 0.5, 2.0}) {
      EXPECT_NEAR(g::distance3(circle(s0), circle(s0 + ds)), ds, 1e-11);
      EXPECT_NEAR(g::distance3(g::gamma1(s0), g::gamma1(s0 + ds)), ds, 1e-12);
    }
}

TEST(Geometry, CircleValidation) {
  EXPECT_THROW(g::CircleGeodesic(-0.1, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(g::CircleGeodesic(0.1, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(g::CircleGeodesic(0.1, 1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(g::Tube(0.0), std::invalid_argument);
  const g::CircleGeodesic right(1.0, 1.0, std::numbers::pi / 2);
  EXPECT_EQ(right.cos_beta(), 0.0);
  EXPECT_EQ(right.sin_beta(), 1.0);
}

TEST(Geometry, DistToAxisMatchesBruteForce) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0), h(0.2, 2.0);
  for (int k = 0; k < 200; ++k) {
    const g::Point3 p{u(rng), u(rng), h(rng)};
    const double brute =
        oracle::minimize([&](double t) { return g::distance3(p, g::gamma1(t)); }, std::log(p.z) - 6, std::log(p.z) + 6);
    EXPECT_NEAR(g::dist_to_axis(p), brute, 1e-7);
  }
}

TEST(Geometry, TubeContainsIsTheCone) {
  const g::Tube tube(0.8);
  const double slope = std::sinh(0.8);
  EXPECT_TRUE(g::tube_contains({slope * 0.999, 0.0, 1.0}, tube));
  EXPECT_FALSE(g::tube_contains({slope * 1.001, 0.0, 1.0}, tube));
}

TEST(Geometry, TubeIntervalEndpointsLieOnTheBoundary) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0.0, 2.0), ur(0.1, 2.0), ub(0.05, std::numbers::pi / 2), uR(0.2, 2.5);
  int checked = 0;
  while (checked < 300) {
    const g::CircleGeodesic c(ua(rng), ur(rng), ub(rng));
    const g::Tube tube(uR(rng));
    const auto range = g::tube_interval(c, tube);
    if (!range) continue;
    ++checked;
    EXPECT_NEAR(g::dist_to_axis(c(0.5 * std::log(range->u_minus))), tube.R, 1e-9);
    if (std::isfinite(range->u_plus)) EXPECT_NEAR(g::dist_to_axis(c(0.5 * std::log(range->u_plus))), tube.R, 1e-9);
  }
}

TEST(Geometry, TubeIntervalSymmetricCase) {
  for (double R : {0.3, 1.0, 2.0}) {
    const auto range = g::tube_interval(g::CircleGeodesic(0.0, 1.7, 0.9), g::Tube(R));
    ASSERT_TRUE(range);
    EXPECT_NEAR(range->u_minus, std::exp(-2.0 * R), 1e-12 * std::exp(-2.0 * R));
    EXPECT_NEAR(range->u_plus, std::exp(2.0 * R), 1e-12 * std::exp(2.0 * R));
  }
}

TEST(Geometry, FarCircleMissesTube) {
  EXPECT_FALSE(g::tube_interval(g::CircleGeodesic(10.0, 0.5, 1.0), g::Tube(0.5)));
}
