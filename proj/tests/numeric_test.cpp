#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "hyperfold/numeric/fft.hpp"
#include "hyperfold/numeric/finite_difference.hpp"
#include "hyperfold/numeric/lanczos.hpp"
#include "hyperfold/numeric/parallel.hpp"
#include "hyperfold/numeric/quadrature.hpp"

namespace nm = hyperfold::numeric;
using cplx = std::complex<double>;

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  for (int order : {1, 4, 8, 16, 32}) {
    const int degree = 2 * order - 1;
    const double got = nm::integrate([&](double x) { return std::pow(x, degree); }, 0.0, 1.0, 1, order);
    EXPECT_NEAR(got, 1.0 / (degree + 1), 1e-14);
  }
  EXPECT_NEAR(nm::integrate([](double x) { return std::cos(x); }, 0.0, 3.0, 4, 16), std::sin(3.0), 1e-14);
}

TEST(FiniteDifference, StencilsOnPolynomials) {
  const auto f = [](double x) { return x * x * x - 2 * x; };
  EXPECT_NEAR(nm::central4<double>(f, 0.7, 1e-2), 3 * 0.49 - 2, 1e-12);
  EXPECT_NEAR(nm::second_central4<double>(f, 0.7, 1e-2), 6 * 0.7, 1e-9);
  const auto g = [](double t, double s) { return t * t * s * s * s + std::sin(t) * s; };
  const double exact = 2 * 0.3 * 3 * 0.8 * 0.8 + std::cos(0.3);
  EXPECT_NEAR(nm::mixed_richardson<double>(g, 0.3, 0.8, 1e-2), exact, 1e-9);
}

TEST(Toeplitz, MatchesNaiveProduct) {
  const std::size_t n = 37;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::vector<cplx> d(2 * n - 1), x(n), out(n);
  for (auto& v : d) v = {g(rng), g(rng)};
  for (auto& v : x) v = {g(rng), g(rng)};
  nm::ToeplitzMultiplier T(n, d);
  T.apply(x.data(), out.data());
  for (std::size_t j = 0; j < n; ++j) {
    cplx ref = 0.0;
    for (std::size_t k = 0; k < n; ++k) ref += d[j - k + n - 1] * x[k];
    EXPECT_NEAR(std::abs(out[j] - ref), 0.0, 1e-12);
  }
}

TEST(Lanczos, TopEigenvalueOfKnownSpectrum) {
  const std::size_t n = 300;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = 1.0 + 0.01 * i;
  const auto apply = [&](const cplx* x, cplx* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = diag[i] * x[i];
  };
  nm::LanczosOptions opt;
  opt.tolerance = 1e-12;
  const auto res = nm::largest_eigenvalue(n, apply, opt);
  EXPECT_NEAR(res.value, diag.back(), 1e-6 * diag.back());
  const auto zero = [&](const cplx*, cplx* out) { std::fill(out, out + n, cplx{}); };
  EXPECT_EQ(nm::largest_eigenvalue(n, zero).value, 0.0);
}

TEST(Lanczos, ReportsNonConvergence) {
  const std::size_t n = 400;
  const auto apply = [&](const cplx* x, cplx* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (1.0 + 1e-3 * std::sin(double(i))) * x[i];
  };
  nm::LanczosOptions opt;
  opt.max_iterations = 3;
  opt.tolerance = 1e-15;
  EXPECT_THROW(nm::largest_eigenvalue(n, apply, opt), nm::ConvergenceError);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  std::vector<double> a(1000), b(1000);
  const auto body = [](std::vector<double>& v) {
    return [&v](std::size_t i) { v[i] = std::sin(double(i)) * std::exp(-1e-3 * i); };
  };
  nm::parallel_for(a.size(), body(a), 1);
  nm::parallel_for(b.size(), body(b), 4);
  EXPECT_EQ(a, b);
}
