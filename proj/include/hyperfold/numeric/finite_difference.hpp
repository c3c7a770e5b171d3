#pragma once

#include <cmath>
#include <concepts>

namespace hyperfold::numeric {

template <class F, class Real>
concept BivariateFunction = std::floating_point<Real> && requires(F f, Real t, Real s) {
  { f(t, s) } -> std::convertible_to<Real>;
};

template <class F, class Real>
concept UnivariateFunction = std::floating_point<Real> && requires(F f, Real x) {
  { f(x) } -> std::convertible_to<Real>;
};

// Five-point first-derivative weights at offsets -2..2 (divide by 12 h).
inline constexpr int kFivePoint[5] = {1, -8, 0, 8, -1};

/// Second-order mixed central difference d^2 f / dt ds.
template <class Real, class F>
  requires BivariateFunction<F, Real>
Real mixed_central2(F&& f, Real t, Real s, Real h) {
  return (f(t + h, s + h) - f(t + h, s - h) - f(t - h, s + h) + f(t - h, s - h)) / (4 * h * h);
}

/// Fourth-order mixed difference: tensor product of five-point stencils.
template <class Real, class F>
  requires BivariateFunction<F, Real>
Real mixed_central4(F&& f, Real t, Real s, Real h) {
  Real acc = 0;
  for (int i = 0; i < 5; ++i) {
    if (kFivePoint[i] == 0) continue;
    Real row = 0;
    for (int j = 0; j < 5; ++j) {
      if (kFivePoint[j] == 0) continue;
      row += kFivePoint[j] * static_cast<Real>(f(t + (i - 2) * h, s + (j - 2) * h));
    }
    acc += kFivePoint[i] * row;
  }
  return acc / (144 * h * h);
}

/// One Richardson level on the fourth-order stencil.
template <class Real, class F>
  requires BivariateFunction<F, Real>
Real mixed_richardson(F&& f, Real t, Real s, Real h) {
  const Real coarse = mixed_central4<Real>(f, t, s, h);
  const Real fine = mixed_central4<Real>(f, t, s, h / 2);
  return (16 * fine - coarse) / 15;
}

/// Five-point first derivative.
template <class Real, class F>
  requires UnivariateFunction<F, Real>
Real central4(F&& f, Real x, Real h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

/// Five-point first derivative with one Richardson level (sixth order).
template <class Real, class F>
  requires UnivariateFunction<F, Real>
Real central_richardson(F&& f, Real x, Real h) {
  const Real coarse = central4<Real>(f, x, h);
  const Real fine = central4<Real>(f, x, h / 2);
  return (16 * fine - coarse) / 15;
}

/// Five-point second derivative.
template <class Real, class F>
  requires UnivariateFunction<F, Real>
Real second_central4(F&& f, Real x, Real h) {
  return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
}

}  // namespace hyperfold::numeric
