#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperfold/bessel.hpp"
#include "hyperfold/numeric/finite_difference.hpp"
#include "hyperfold/numeric/quadrature.hpp"
#include "hyperfold/phase.hpp"

namespace hyperfold::wave {

using complex = std::complex<double>;

/// Transform pair used by the cutoffs: h^(tau) = int h(x) e^{-i tau x} dx and
/// h(x) = scale * int h^(tau) e^{i tau x} dtau.
struct FourierConvention {
  double forward_scale = 1.0;
  double inverse_scale = 1.0 / (2.0 * std::numbers::pi);
};

enum class BumpProfile { ExpInverseQuadratic };

namespace detail {

// exp(-1/x) for x > 0, zero otherwise.
inline double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
inline double psi_prime(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

// Smooth step: 0 for x <= 0, 1 for x >= 1.
inline double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = psi(x), b = psi(1.0 - x);
  return a / (a + b);
}
inline double smoothstep_prime(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = psi(x), b = psi(1.0 - x);
  const double da = psi_prime(x), db = -psi_prime(1.0 - x);
  return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

}  // namespace detail

/// The cutoffs rho^, chi^ = (rho^ * rho^) / 2pi and the bump beta.
class CutoffPair {
 public:
  static constexpr int kIntervals = 4096;

  explicit CutoffPair(BumpProfile profile = BumpProfile::ExpInverseQuadratic) : profile_(profile) {
    // rho(0) = (1/2pi) int rho^ = 1
    rho_scale_ = 1.0;
    const double mass = numeric::integrate([this](double t) { return rho_hat(t); }, -0.5, 0.5, 32, 20);
    rho_scale_ = 2.0 * std::numbers::pi / mass;
    build_chi_table();
  }

  BumpProfile profile() const { return profile_; }
  FourierConvention convention() const { return {}; }

  double rho_hat(double tau) const {
    const double x = 2.0 * tau;
    const double q = 1.0 - x * x;
    return q > 0.0 ? rho_scale_ * std::exp(-1.0 / q) : 0.0;
  }
  double rho_hat_prime(double tau) const {
    const double x = 2.0 * tau;
    const double q = 1.0 - x * x;
    return q > 0.0 ? rho_scale_ * std::exp(-1.0 / q) * (-4.0 * x / (q * q)) : 0.0;
  }

  /// Cubic Hermite interpolation of the tabulated autocorrelation; exactly 0 for |tau| >= 1.
  double chi_hat(double tau) const { return interpolate(tau, false); }
  double chi_hat_prime(double tau) const { return interpolate(tau, true); }

  /// 1 on |tau| <= 3/2, 0 on |tau| >= 2.
  double beta(double tau) const { return 1.0 - detail::smoothstep(2.0 * (std::fabs(tau) - 1.5)); }
  double beta_prime(double tau) const {
    const double sgn = tau < 0.0 ? -1.0 : 1.0;
    return -2.0 * sgn * detail::smoothstep_prime(2.0 * (std::fabs(tau) - 1.5));
  }

  /// rho(x) and chi(x) by inverse transform; both even and real.
  double rho(double x) const {
    return inverse([this](double t) { return rho_hat(t); }, 0.5, x);
  }
  double chi(double x) const {
    return inverse([this](double t) { return chi_hat(t); }, 1.0, x);
  }

 private:
  BumpProfile profile_;
  double rho_scale_ = 1.0;
  std::vector<double> value_, slope_;

  template <class F>
  double inverse(F&& f, double half_width, double x) const {
    const std::size_t panels = 64 + static_cast<std::size_t>(std::ceil(std::fabs(x) * half_width * 4.0));
    const double integral =
        numeric::integrate([&](double t) { return f(t) * std::cos(t * x); }, -half_width, half_width, panels, 20);
    return convention().inverse_scale * integral;
  }

  void build_chi_table() {
    const int n = kIntervals;
    value_.assign(n + 1, 0.0);
    slope_.assign(n + 1, 0.0);
    const double inv2pi = 1.0 / (2.0 * std::numbers::pi);
    // Even function: fill tau >= 0 and mirror.
    for (int k = n / 2; k <= n; ++k) {
      const double tau = -1.0 + 2.0 * k / n;
      if (tau >= 1.0) break;
      const double lo = std::max(-0.5, tau - 0.5), hi = std::min(0.5, tau + 0.5);
      value_[k] = inv2pi * numeric::integrate([&](double s) { return rho_hat(s) * rho_hat(tau - s); }, lo, hi, 16, 20);
      slope_[k] = inv2pi * numeric::integrate([&](double s) { return rho_hat(s) * rho_hat_prime(tau - s); }, lo, hi, 16, 20);
      value_[n - k] = value_[k];
      slope_[n - k] = -slope_[k];
    }
    slope_[n / 2] = 0.0;
  }

  double interpolate(double tau, bool derivative) const {
    if (!(std::fabs(tau) < 1.0)) return 0.0;
    const double h = 2.0 / kIntervals;
    const double pos = (tau + 1.0) / h;
    const int k = std::min(kIntervals - 1, static_cast<int>(pos));
    const double x = pos - k;
    const double y0 = value_[k], y1 = value_[k + 1], m0 = slope_[k] * h, m1 = slope_[k + 1] * h;
    if (!derivative) {
      const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
      const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
      return h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
    }
    const double d00 = 6 * x * x - 6 * x, d10 = 3 * x * x - 4 * x + 1;
    const double d01 = -6 * x * x + 6 * x, d11 = 3 * x * x - 2 * x;
    return (d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1) / h;
  }
};

inline CutoffPair make_cutoffs(BumpProfile profile = BumpProfile::ExpInverseQuadratic) { return CutoffPair(profile); }

/// r |t| G'(v)/v at v = sqrt(t^2 - r^2) for |t| >= r, else 0.
inline double wave_tail(double t, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("wave_tail: r must be positive");
  const double at = std::fabs(t);
  if (at < r) return 0.0;
  const double v = std::sqrt((at - r) * (at + r));
  return r * at * bessel::gprime_over_v(v);
}

/// Value of J1'(0) from the series.
inline constexpr double kJ1PrimeAtZero = 0.5;

struct KernelEvaluation {
  complex total{};
  complex delta_prime_term{};
  complex delta_term{};
  complex tail_term{};
  double r = 0.0, lambda = 0.0, T = 0.0;
  double tail_error = 0.0;  ///< change of the tail under one panel doubling

  double bound_ratio() const { return std::abs(total) * T * std::exp(0.5 * r) / lambda; }
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved) : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

namespace detail {

struct Multiplier {
  const CutoffPair& cut;
  double lambda, T;
  // m(tau) = (1 - beta(tau)) chi^(tau/T)
  double m(double tau) const { return (1.0 - cut.beta(tau)) * cut.chi_hat(tau / T); }
  double m_prime(double tau) const {
    return -cut.beta_prime(tau) * cut.chi_hat(tau / T) + (1.0 - cut.beta(tau)) * cut.chi_hat_prime(tau / T) / T;
  }
  complex h(double tau) const { return m(tau) * std::polar(1.0, lambda * tau); }
  complex h_prime(double tau) const { return complex(m_prime(tau), lambda * m(tau)) * std::polar(1.0, lambda * tau); }
};

}  // namespace detail

/// K_alpha as a function of the distance r between the two points.
inline KernelEvaluation kernel_at_distance(double r, double lambda, double T, const CutoffPair& cut,
                                           double tolerance = 1e-8) {
  if (!(r >= 1.0)) throw phase::PreconditionError("k_alpha: distance r = " + std::to_string(r) + " < 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("k_alpha: lambda must be positive");
  if (!(T >= 2.0)) throw std::invalid_argument("k_alpha: T must be at least 2");
  KernelEvaluation out;
  out.r = r;
  out.lambda = lambda;
  out.T = T;
  if (r >= T) return out;  // chi^(tau/T) vanishes for |tau| >= T

  const detail::Multiplier mult{cut, lambda, T};
  const double pre = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi * T * std::sinh(r));
  out.delta_prime_term = pre * (-mult.h_prime(r) + mult.h_prime(-r));
  out.delta_term = -pre * kJ1PrimeAtZero * r * (mult.h(r) + mult.h(-r));

  // Tail over r <= |tau| <= T; the multiplier vanishes below |tau| = 3/2.
  const double lo = std::max(r, 1.5);
  if (lo < T) {
    const double width = std::min(0.25, 0.25 * 2.0 * std::numbers::pi / lambda);
    std::size_t panels = static_cast<std::size_t>(std::ceil((T - lo) / width));
    const auto integrand = [&](double tau) {
      // both signs of tau at once; wave_tail is even
      return (mult.h(tau) + mult.h(-tau)) * wave_tail(tau, r);
    };
    const auto magnitude = [&](double tau) {
      return (std::abs(mult.h(tau)) + std::abs(mult.h(-tau))) * std::fabs(wave_tail(tau, r));
    };
    const complex coarse = numeric::integrate(integrand, lo, T, panels, 8);
    const complex fine = numeric::integrate(integrand, lo, T, 2 * panels, 8);
    const double scale = numeric::integrate(magnitude, lo, T, panels, 8);
    out.tail_error = std::abs(fine - coarse) / std::max(scale, 1e-300);
    if (out.tail_error > tolerance)
      throw QuadratureError("k_alpha: tail quadrature did not converge", out.tail_error);
    out.tail_term = -pre * fine;
  }
  out.total = out.delta_prime_term + out.delta_term + out.tail_term;
  return out;
}

inline KernelEvaluation k_alpha(double t_param, double s_param, const phase::PhaseParams& p, double lambda, double T,
                                const CutoffPair& cut) {
  return kernel_at_distance(phase::phi(t_param, s_param, p), lambda, T, cut);
}

/// Smooth test function on the line with its derivative and a support window.
struct TestFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double lo = 0.0, hi = 0.0;  ///< outside [lo, hi] the function is zero (to double precision)
};

inline TestFunction gaussian_bump(double center, double width) {
  TestFunction f;
  f.value = [=](double t) {
    const double x = (t - center) / width;
    return std::exp(-0.5 * x * x);
  };
  f.derivative = [=](double t) {
    const double x = (t - center) / width;
    return -x / width * std::exp(-0.5 * x * x);
  };
  f.lo = center - 12.0 * width;
  f.hi = center + 12.0 * width;
  return f;
}

inline TestFunction operator+(const TestFunction& f, const TestFunction& g) {
  return {[=](double t) { return f.value(t) + g.value(t); }, [=](double t) { return f.derivative(t) + g.derivative(t); },
          std::min(f.lo, g.lo), std::max(f.hi, g.hi)};
}

inline TestFunction operator*(double c, const TestFunction& f) {
  return {[=](double t) { return c * f.value(t); }, [=](double t) { return c * f.derivative(t); }, f.lo, f.hi};
}

inline TestFunction reflect(const TestFunction& f) {
  return {[=](double t) { return f.value(-t); }, [=](double t) { return -f.derivative(-t); }, -f.hi, -f.lo};
}

namespace detail {
inline std::size_t panels_for(double a, double b, double max_width) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / max_width)));
}
}  // namespace detail

/// Pairing of the explicit wave kernel at distance r with a test function in t:
/// (1/(4 pi sinh r)) [ <delta'(|t| - r), f> - (1/2) <|t| delta(|t| - r), f> - int r|t| G'(v)/v f ].
inline double wave_kernel_pairing(const TestFunction& f, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("wave_kernel_pairing: r must be positive");
  const double boundary = -f.derivative(r) + f.derivative(-r);
  const double point = -kJ1PrimeAtZero * r * (f.value(r) + f.value(-r));
  double tail = 0.0;
  const double width = std::max(1e-3, (f.hi - f.lo) / 256.0);
  const auto piece = [&](double a, double b) {
    if (b <= a) return 0.0;
    return numeric::integrate([&](double t) { return f.value(t) * wave_tail(t, r); }, a, b,
                              detail::panels_for(a, b, width), 16);
  };
  tail += piece(std::max(f.lo, r), f.hi);
  tail += piece(f.lo, std::min(f.hi, -r));
  return (boundary + point - tail) / (4.0 * std::numbers::pi * std::sinh(r));
}

/// Independent evaluation via cos t sqrt(-Delta) = cos t sqrt(-L) - t int_0^t G(sqrt(t^2 - s^2)) cos s sqrt(-L) ds:
/// with g(s) = int_s^inf f(t) t G(sqrt(t^2 - s^2)) dt the pairing is (-f'(r) + g'(r)) / (4 pi sinh r),
/// both derivatives taken numerically.
inline double relation_oracle(const TestFunction& f, double r) {
  if (!(f.lo > 0.0)) throw std::domain_error("relation_oracle: test function support must lie in t > 0");
  if (!(r > 0.0)) throw std::invalid_argument("relation_oracle: r must be positive");
  const double width = std::max(1e-3, (f.hi - f.lo) / 256.0);
  const auto g = [&](double s) {
    const double a = std::max(s, f.lo);
    if (a >= f.hi) return 0.0;
    return numeric::integrate(
        [&](double t) { return f.value(t) * t * bessel::G(std::sqrt(std::max(0.0, (t - s) * (t + s)))); }, a, f.hi,
        detail::panels_for(a, f.hi, width), 16);
  };
  const double h = std::min(0.02, 0.25 * (f.hi - f.lo) / 12.0);
  const double df = numeric::central_richardson<double>([&](double x) { return f.value(x); }, r, h);
  const double dg = numeric::central_richardson<double>(g, r, h);
  return (-df + dg) / (4.0 * std::numbers::pi * std::sinh(r));
}

}  // namespace hyperfold::wave
