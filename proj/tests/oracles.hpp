#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the library's closed forms.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// Hyperbolic distance between gamma1(t) and gamma2(s), straight from the
/// half-space formula acosh(1 + |p - q|^2 / (2 z z')) in long double.
inline long double distance(long double a, long double r, long double beta, long double t, long double s) {
  const long double c = beta == std::numbers::pi_v<double> / 2 ? 0.0L : std::cos(beta);
  const long double sn = beta == std::numbers::pi_v<double> / 2 ? 1.0L : std::sin(beta);
  const long double th = std::tanh(s);
  const long double x = a - th * r * c, y = -th * r * sn, z = r / std::cosh(s);
  const long double z1 = std::exp(t);
  const long double num = x * x + y * y + (z1 - z) * (z1 - z);
  const long double arg = num / (2.0L * z1 * z);
  return std::log1p(arg + std::sqrt(arg * (arg + 2.0L)));
}

/// Fourth-order mixed difference with one Richardson step, on the direct distance.
inline double mixed_fd(double a, double r, double beta, double t, double s, long double h = 2e-3L) {
  const auto stencil = [&](long double hh) {
    static constexpr long double w[4] = {1.0L, -8.0L, 8.0L, -1.0L};
    static constexpr int off[4] = {-2, -1, 1, 2};
    long double acc = 0.0L;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) acc += w[i] * w[j] * distance(a, r, beta, t + off[i] * hh, s + off[j] * hh);
    return acc / (144.0L * hh * hh);
  };
  return static_cast<double>((16.0L * stencil(h / 2) - stencil(h)) / 15.0L);
}

/// Golden-section minimum of a unimodal function on [lo, hi].
inline double minimize(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iterations; ++k) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a), fd = f(d);
    }
  }
  return std::min(fc, fd);
}

/// Composite Simpson rule with n (even) intervals.
template <class F>
auto simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  auto acc = f(a) + f(b);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return acc * (h / 3.0);
}

struct Draw {
  double a, r, beta, t, s;
};

/// Random geometry with the points at hyperbolic distance at least 2.
inline std::vector<Draw> admissible_draws(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(0.0, 3.0), ur(0.05, 2.0), ub(1e-3, std::numbers::pi / 2), ut(0.0, 1.0),
      us(-2.0, 2.0);
  std::vector<Draw> out;
  while (out.size() < count) {
    Draw d{ua(rng), ur(rng), ub(rng), ut(rng), us(rng)};
    if (distance(d.a, d.r, d.beta, d.t, d.s) >= 2.0L) out.push_back(d);
  }
  return out;
}

}  // namespace oracle
