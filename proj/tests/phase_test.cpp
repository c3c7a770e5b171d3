#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperfold/audits.hpp"
#include "hyperfold/phase.hpp"
#include "oracles.hpp"

namespace ph = hyperfold::phase;
namespace geo = hyperfold::geometry;
constexpr double kRight = std::numbers::pi / 2;

TEST(Phase, PhiIsTheDistanceBetweenGeodesics) {
  const auto p = ph::PhaseParams::make(0.6, 0.9, 1.2, -0.4);
  for (double t : {0.0, 0.3, 1.0})
    for (double s : {-0.4, 0.1, 0.6})
      EXPECT_NEAR(ph::phi(t, s, p), geo::distance3(geo::gamma1(t), p.geodesic()(s)), 1e-12);
}

TEST(Phase, MixedDerivativeMatchesDirectFiniteDifferences) {
  for (const auto& d : oracle::admissible_draws(2000, 42)) {
    const auto p = ph::PhaseParams::make(d.a, d.r, d.beta);
    const double scale = ph::phi_st_scale(d.t, d.s, p);
    EXPECT_LE(std::fabs(ph::phi_st(d.t, d.s, p) - oracle::mixed_fd(d.a, d.r, d.beta, d.t, d.s)), 1e-7 * scale)
        << d.a << " " << d.r << " " << d.beta << " " << d.t << " " << d.s;
  }
}

TEST(Phase, NumericDerivativeAgreesWithClosedForm) {
  const auto p = ph::PhaseParams::make(0.2, 0.11, std::numbers::pi / 3, 1.0);
  for (double t : {0.1, 0.5, 0.9}) {
    const auto n = ph::phi_st_numeric(t, 1.4, p);
    EXPECT_FALSE(n.step_warning);
    EXPECT_NEAR(n.value, ph::phi_st(t, 1.4, p), 1e-7 * ph::phi_st_scale(t, 1.4, p));
  }
  EXPECT_TRUE(ph::phi_st_numeric(0.5, 1.4, p, 1e-14).step_warning);
}

TEST(Phase, ZeroSetIdentities) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.0, 3.0), ur(0.05, 3.0), ub(1e-3, kRight);
  int n = 0;
  while (n < 2000) {
    const auto p = ph::PhaseParams::make(ua(rng), ur(rng), ub(rng));
    const auto z = ph::zero_geometry(p);
    if (z.empty) continue;
    ++n;
    EXPECT_NEAR(z.X0 * z.Y0 - z.B, p.d2_squared(), 1e-12 * z.X0 * z.Y0);
    const double ln_d1 = std::log(p.d1);
    EXPECT_NEAR(z.t_plus - z.s_plus, ln_d1, 1e-12 * std::max(1.0, std::fabs(z.t_plus) + std::fabs(z.s_plus)));
    EXPECT_NEAR(z.t_minus - z.s_minus, ln_d1, 1e-12 * std::max(1.0, std::fabs(z.t_minus) + std::fabs(z.s_minus)));
  }
}

TEST(Phase, EmptyZeroSetWhenCircleLeansAway) {
  const auto z = ph::zero_geometry(ph::PhaseParams::make(2.0, 0.3, std::numbers::pi / 3));
  EXPECT_TRUE(z.empty);
  EXPECT_EQ(ph::classify_region(0.5, 0.0, z, 0.05), ph::RegionLabel::NonStationary);
}

TEST(Phase, RightAngleDegeneratesToTwoLines) {
  const double a = 2.169, r = 0.5;
  const auto p = ph::PhaseParams::make(a, r, kRight);
  const auto z = ph::zero_geometry(p);
  EXPECT_EQ(z.B, 0.0);
  const double t0 = 0.5 * std::log(a * a + r * r);
  for (double s = -1.0; s <= 1.0; s += 0.125)
    EXPECT_LE(std::fabs(ph::phi_st(t0, s, p)), 1e-9 * ph::phi_st_scale(t0, s, p));
  for (double t = -1.0; t <= 2.0; t += 0.125)
    EXPECT_LE(std::fabs(ph::phi_st(t, 0.0, p)), 1e-9 * ph::phi_st_scale(t, 0.0, p));
}

TEST(Phase, CriticalCurvesSolvePhiSt) {
  const auto p = ph::PhaseParams::make(0.2, 0.11, std::numbers::pi / 3);
  const auto curves = ph::critical_curves(p);
  const auto& z = curves.geometry();
  for (int k = 1; k <= 50; ++k) {
    const double s = z.s_plus + 0.05 * k;
    const double t = curves.t_c(s);
    EXPECT_LE(std::fabs(ph::phi_st(t, s, p)), 1e-9 * ph::phi_st_scale(t, s, p));
    const double t2 = z.t_plus + 0.05 * k;
    const double s2 = curves.s_c(t2);
    EXPECT_LE(std::fabs(ph::phi_st(t2, s2, p)), 1e-9 * ph::phi_st_scale(t2, s2, p));
  }
  EXPECT_THROW(curves.t_c(0.5 * (z.s_plus + z.s_minus)), std::domain_error);
}

TEST(Phase, RestrictionTrickFactorization) {
  const auto p = ph::PhaseParams::make(0.2, 0.11, std::numbers::pi / 3);
  const auto z = ph::zero_geometry(p);
  const double ac = p.a * p.cos_beta;
  for (double delta : {-0.7, 0.0, 0.4}) {
    const auto roots = ph::restriction_roots(z, delta);
    for (double t : {0.1, 0.5, 1.5}) {
      const double s = t + delta, X = std::exp(2 * t), Y = std::exp(2 * s);
      const double bracket = (ac - p.r) * (X * Y + p.d2_squared()) + (ac + p.r) * (X + p.d1_squared() * Y);
      const double factored = (ac - p.r) * std::exp(2 * delta) * (X - roots.lower) * (X - roots.upper);
      EXPECT_NEAR(bracket, factored, 1e-10 * std::max(1.0, std::fabs(bracket)));
    }
  }
}

TEST(Phase, RegionClassification) {
  const auto p = ph::PhaseParams::make(2.169, 0.5, kRight, -0.5);
  const double t0 = 0.5 * std::log(2.169 * 2.169 + 0.25);
  EXPECT_EQ(ph::classify_region(t0, 0.0, p, 0.05), ph::RegionLabel::YoungPart);
  EXPECT_EQ(ph::classify_region(t0, 0.3, p, 0.05), ph::RegionLabel::LeftFold);
  EXPECT_EQ(ph::classify_region(0.1, 0.0, p, 0.05), ph::RegionLabel::RightFold);
  EXPECT_EQ(ph::classify_region(0.1, 0.3, p, 0.05), ph::RegionLabel::NonStationary);
  EXPECT_THROW(ph::classify_region(0.1, 0.3, p, 1.5), std::invalid_argument);
}

TEST(Phase, DistanceToHyperbolicZeroSetMatchesBruteForce) {
  const auto p = ph::PhaseParams::make(0.2, 0.11, std::numbers::pi / 3);
  const auto curves = ph::critical_curves(p);
  const auto& z = curves.geometry();
  for (double t : {0.2, 0.6, 1.0})
    for (double s : {z.s_plus + 0.2, z.s_plus + 0.4}) {
      const double d = ph::distance_to_zero_set(t, s, z, 0.1);
      if (d > 0.1) continue;
      const double brute = oracle::minimize(
          [&](double ss) { return std::hypot(t - curves.t_c(ss), s - ss); }, z.s_plus + 1e-6, s + 0.5);
      EXPECT_NEAR(d, brute, 1e-6);
    }
}

TEST(Audits, AdmissibilityRejectsCloseGeodesics) {
  const auto p = ph::PhaseParams::make(0.3, 1.0, 1.0);
  const auto rep = ph::admissibility(p, 10.0, 64);
  EXPECT_FALSE(rep.admissible());
  EXPECT_FALSE(rep.violations().empty());
  EXPECT_THROW(ph::require_admissible(p, 10.0, 64, std::nullopt), ph::PreconditionError);
}

TEST(Audits, Lemma1OnGenericTilt) {
  const auto p = ph::PhaseParams::make(0.2, 0.11, std::numbers::pi / 3, 1.0);
  const auto a = ph::lemma1_audit(p, 10.0, 0.05, 96);
  EXPECT_TRUE(a.all_positive());
  EXPECT_TRUE(a.nonstationary.present && a.left_fold.present && a.right_fold.present);
  EXPECT_LE(a.nonstationary.implied_C, 25.0);
}

TEST(Audits, Lemma2OnRightAngle) {
  const auto p = ph::PhaseParams::make(2.169, 0.5, kRight, -0.5);
  const auto a = ph::lemma2_audit(p, 10.0, 4, 96);
  EXPECT_EQ(a.entries.size(), 6u);
  EXPECT_TRUE(a.all_finite());
  EXPECT_LE(a.mixed_agreement(), 1e-6);
}
