#include <gtest/gtest.h>

#include <cmath>

#include "hyperfold/phase.hpp"
#include "hyperfold/wave_kernel.hpp"

namespace w = hyperfold::wave;

TEST(Cutoffs, NormalizationAndSupport) {
  const auto cut = w::make_cutoffs();
  EXPECT_NEAR(cut.rho(0.0), 1.0, 1e-12);
  EXPECT_NEAR(cut.chi(0.0), 1.0, 1e-10);
  EXPECT_EQ(cut.rho_hat(0.5), 0.0);
  EXPECT_EQ(cut.rho_hat(-0.7), 0.0);
  EXPECT_EQ(cut.chi_hat(1.0), 0.0);
  EXPECT_EQ(cut.chi_hat(-1.3), 0.0);
  EXPECT_GT(cut.chi_hat(0.0), 0.0);
}

TEST(Cutoffs, ChiIsRhoSquared) {
  const auto cut = w::make_cutoffs();
  for (double x : {0.5, 1.0, 3.0, 7.5}) EXPECT_NEAR(cut.chi(x), cut.rho(x) * cut.rho(x), 1e-10);
}

TEST(Cutoffs, BetaPlateau) {
  const auto cut = w::make_cutoffs();
  EXPECT_EQ(cut.beta(0.0), 1.0);
  EXPECT_EQ(cut.beta(1.5), 1.0);
  EXPECT_EQ(cut.beta(2.0), 0.0);
  EXPECT_EQ(cut.beta(-3.0), 0.0);
  const double h = 1e-6;
  EXPECT_NEAR(cut.beta_prime(1.8), (cut.beta(1.8 + h) - cut.beta(1.8 - h)) / (2 * h), 1e-6);
}

TEST(WaveKernel, PairingMatchesRelationOracle) {
  for (double r : {2.0, 4.0, 8.0})
    for (double offset : {1.0, 2.0, 3.0}) {
      const auto f = w::gaussian_bump(r + offset, 0.1);
      const double direct = w::wave_kernel_pairing(f, r);
      const double oracle = w::relation_oracle(f, r);
      EXPECT_NEAR(direct, oracle, 1e-6 * std::fabs(oracle)) << r << " " << offset;
    }
}

TEST(WaveKernel, FinitePropagation) {
  for (double r : {4.0, 8.0}) {
    const double scale = std::fabs(w::wave_kernel_pairing(w::gaussian_bump(r + 1.0, 0.1), r));
    EXPECT_LE(std::fabs(w::wave_kernel_pairing(w::gaussian_bump(r - 3.5, 0.1), r)), 1e-8 * scale);
  }
}

TEST(WaveKernel, EvenTestFunctionsDoubleTheOneSidedPairing) {
  const auto f = w::gaussian_bump(5.0, 0.1);
  const auto even = f + w::reflect(f);
  EXPECT_NEAR(w::wave_kernel_pairing(even, 4.0), 2.0 * w::wave_kernel_pairing(f, 4.0), 1e-12);
}

TEST(WaveKernel, DomainOfKernelAtDistance) {
  const auto cut = w::make_cutoffs();
  EXPECT_THROW(w::kernel_at_distance(0.5, 256.0, 8.0, cut), hyperfold::phase::PreconditionError);
  const auto beyond = w::kernel_at_distance(9.0, 256.0, 8.0, cut);
  EXPECT_EQ(beyond.total, std::complex<double>(0.0, 0.0));
}

TEST(WaveKernel, TermsAddUpAndStayFinite) {
  const auto cut = w::make_cutoffs();
  for (double r : {2.0, 5.0}) {
    const auto k = w::kernel_at_distance(r, 512.0, 8.0, cut);
    EXPECT_NEAR(std::abs(k.total - (k.delta_prime_term + k.delta_term + k.tail_term)), 0.0, 1e-14 * std::abs(k.total));
    EXPECT_TRUE(std::isfinite(k.bound_ratio()));
    EXPECT_GT(k.bound_ratio(), 0.0);
  }
}
