#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace hyperfold::bessel {

enum class Regime { Series, Asymptotic };

struct BesselEval {
  double value = 0.0;
  Regime regime = Regime::Series;
  double est_error = 0.0;
};

/// |v| above which J1 switches from the power series to the Hankel expansion.
inline constexpr double kSeriesLimit = 12.0;
/// |v| below which G and G'/v are summed as power series in w = v^2.
inline constexpr double kSmallArgLimit = 0.5;

namespace detail {

// Power series for J_n, n = 0, 1, 2; v >= 0.
inline BesselEval jn_series(int n, double v) {
  using ld = long double;
  const ld half = static_cast<ld>(v) / 2;
  const ld q = half * half;
  ld term = 1;
  for (int k = 1; k <= n; ++k) term *= half / k;
  ld sum = term, max_term = std::fabs(term);
  int k = 0;
  for (; k < 200; ++k) {
    term *= -q / ((k + 1) * static_cast<ld>(k + 1 + n));
    sum += term;
    max_term = std::max(max_term, std::fabs(term));
    if (k + 1 > half && std::fabs(term) <= 1e-17L * std::fabs(sum)) break;
    if (term == 0) break;
  }
  const ld next = std::fabs(term) * q / ((k + 2) * static_cast<ld>(k + 2 + n));
  const ld rounding = max_term * (k + 2) * std::numeric_limits<ld>::epsilon();
  return {static_cast<double>(sum), Regime::Series, static_cast<double>(next + rounding)};
}

// Hankel expansion for J_n, truncated at its smallest term; v > 0.
inline BesselEval jn_hankel(int n, double v) {
  using ld = long double;
  const ld x = v;
  const ld mu = 4.0L * n * n;
  ld p = 1, q = 0;
  ld a = 1;
  ld omitted = 0;
  for (int k = 1; k < 60; ++k) {
    const ld odd = 2.0L * k - 1;
    const ld next = a * (mu - odd * odd) / (k * 8.0L * x);
    if (std::fabs(next) >= std::fabs(a) || next == 0) {
      omitted = std::fabs(next);
      break;
    }
    a = next;
    // a_k enters P with sign (-1)^{k/2} for even k, Q with (-1)^{(k-1)/2} for odd k.
    switch (k % 4) {
      case 0: p += a; break;
      case 1: q += a; break;
      case 2: p -= a; break;
      case 3: q -= a; break;
    }
    omitted = std::fabs(a);
  }
  const ld chi = x - (0.5L * n + 0.25L) * std::numbers::pi_v<ld>;
  const ld envelope = std::sqrt(2.0L / (std::numbers::pi_v<ld> * x));
  const ld value = envelope * (p * std::cos(chi) - q * std::sin(chi));
  return {static_cast<double>(value), Regime::Asymptotic, static_cast<double>(envelope * omitted)};
}

inline BesselEval jn(int n, double v) {
  const double av = std::fabs(v);
  BesselEval e = av <= kSeriesLimit ? jn_series(n, av) : jn_hankel(n, av);
  if (v < 0 && (n % 2) == 1) e.value = -e.value;
  return e;
}

// G(v) = Gt(w), w = v^2: Gt(w) = sum (-1)^k (w/4)^k / (2 k! (k+1)!).
inline double g_tilde(double w) {
  long double term = 0.5L, sum = term;
  const long double q = static_cast<long double>(w) / 4;
  for (int k = 1; k < 30; ++k) {
    term *= -q / (k * static_cast<long double>(k + 1));
    sum += term;
    if (std::fabs(term) < 1e-21L) break;
  }
  return static_cast<double>(sum);
}

// 2 Gt'(w) = sum_{k>=1} (-1)^k (w/4)^{k-1} / (4 (k-1)! (k+1)!).
inline double two_g_tilde_prime(double w) {
  long double term = -0.125L, sum = term;
  const long double q = static_cast<long double>(w) / 4;
  for (int k = 2; k < 30; ++k) {
    term *= -q / ((k - 1) * static_cast<long double>(k + 1));
    sum += term;
    if (std::fabs(term) < 1e-21L) break;
  }
  return static_cast<double>(sum);
}

}  // namespace detail

inline BesselEval j1(double v) { return detail::jn(1, v); }

/// J1(v)/v, an entire function of v^2 with G(0) = 1/2.
inline double G(double v) {
  const double av = std::fabs(v);
  if (av < kSmallArgLimit) return detail::g_tilde(av * av);
  return detail::jn(1, av).value / av;
}

/// G'(v)/v, bounded on the whole line with value -1/8 at the origin.
inline double gprime_over_v(double v) {
  const double av = std::fabs(v);
  if (av < kSmallArgLimit) return detail::two_g_tilde_prime(av * av);
  // J1' = J0 - J1/v, hence G'(v)/v = (J0 - 2 J1/v) / v^2.
  const double j0 = detail::jn(0, av).value;
  const double j1v = detail::jn(1, av).value;
  return (j0 - 2.0 * j1v / av) / (av * av);
}

struct OverlapReport {
  double max_error = 0.0;  ///< max |series - Hankel| / sqrt(2 / (pi v)) over J0 and J1
  double at = 0.0;
  int order = 0;
};

/// Cross-check of the two regimes on [lo, hi], relative to the Hankel envelope
/// (plain relative error is meaningless at the zeros of J_n).
inline OverlapReport regime_overlap(double lo = 10.0, double hi = 14.0, int samples = 4001) {
  OverlapReport rep;
  for (int k = 0; k < samples; ++k) {
    const double v = lo + (hi - lo) * k / (samples - 1);
    const double envelope = std::sqrt(2.0 / (std::numbers::pi * v));
    for (int n = 0; n <= 1; ++n) {
      const double e = std::fabs(detail::jn_series(n, v).value - detail::jn_hankel(n, v).value) / envelope;
      if (e > rep.max_error) rep = {e, v, n};
    }
  }
  return rep;
}

}  // namespace hyperfold::bessel
