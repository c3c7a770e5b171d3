#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hyperfold::numeric {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMaxGaussOrder = 64;

namespace detail {
inline GaussLegendreRule build_gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    long double dp = 1;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    // Refresh the derivative at the converged node.
    long double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    const long double w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = static_cast<double>(-x);
    rule.nodes[n - 1 - i] = static_cast<double>(x);
    rule.weights[i] = rule.weights[n - 1 - i] = static_cast<double>(w);
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}
}  // namespace detail

inline const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1 || n > kMaxGaussOrder) throw std::invalid_argument("gauss_legendre: order out of range");
  static const std::array<GaussLegendreRule, kMaxGaussOrder + 1> rules = [] {
    std::array<GaussLegendreRule, kMaxGaussOrder + 1> out;
    for (int k = 1; k <= kMaxGaussOrder; ++k) out[k] = detail::build_gauss_legendre(k);
    return out;
  }();
  return rules[n];
}

/// Composite Gauss-Legendre rule on [a, b] with equal panels.
template <class F>
auto integrate(F&& f, double a, double b, std::size_t panels, int order = 16) {
  const auto& rule = gauss_legendre(order);
  using R = decltype(f(a));
  R total{};
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    R acc{};
    for (int i = 0; i < order; ++i) acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    total += acc * (0.5 * h);
  }
  return total;
}

/// Golden-section search for a minimum of a unimodal function on [a, b].
template <class F>
double golden_section_min(F&& f, double a, double b, double tol = 1e-12, int max_iter = 200) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace hyperfold::numeric
