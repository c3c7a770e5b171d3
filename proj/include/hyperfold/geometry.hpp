#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace hyperfold::geometry {

/// A point (x, y, z) of the upper half-space, z > 0.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;
};

/// The vertical geodesic t -> (0, 0, e^t).
struct AxisGeodesic {
  Point3 operator()(double t) const { return {0.0, 0.0, std::exp(t)}; }
};

/// Unit-speed half-circle of Euclidean radius r centered at (a, 0, 0),
/// tilted by beta away from the xz-plane.
class CircleGeodesic {
 public:
  CircleGeodesic(double a, double r, double beta) : a_(a), r_(r), beta_(beta) {
    if (!(a >= 0.0) || !std::isfinite(a))
      throw std::invalid_argument("CircleGeodesic: a must be finite and >= 0");
    if (!(r > 0.0) || !std::isfinite(r))
      throw std::invalid_argument("CircleGeodesic: r must be finite and > 0");
    if (!(beta > 0.0 && beta <= std::numbers::pi / 2))
      throw std::invalid_argument("CircleGeodesic: beta out of (0, pi/2]");
    // cos(pi/2) rounds to 6e-17 in double; the right angle is special-cased
    // so that the degenerate geometry is reproduced exactly.
    cos_beta_ = beta == std::numbers::pi / 2 ? 0.0 : std::cos(beta);
    sin_beta_ = beta == std::numbers::pi / 2 ? 1.0 : std::sin(beta);
  }

  double a() const { return a_; }
  double r() const { return r_; }
  double beta() const { return beta_; }
  double cos_beta() const { return cos_beta_; }
  double sin_beta() const { return sin_beta_; }

  /// Squared Euclidean distances from the endpoints at s = +inf and s = -inf
  /// to the origin.
  double d1_squared() const {
    if (cos_beta_ == 0.0) return a_ * a_ + r_ * r_;
    // (a - r)^2 + 2ar(1 - cos beta), with 1 - cos beta = 2 sin^2(beta/2)
    const double h = std::sin(0.5 * beta_);
    return (a_ - r_) * (a_ - r_) + 4.0 * a_ * r_ * h * h;
  }
  double d2_squared() const { return a_ * a_ + r_ * r_ + 2.0 * a_ * r_ * cos_beta_; }

  Point3 operator()(double s) const {
    const double th = std::tanh(s);
    return {a_ - th * r_ * cos_beta_, -th * r_ * sin_beta_, r_ / std::cosh(s)};
  }

 private:
  double a_, r_, beta_;
  double cos_beta_ = 0.0, sin_beta_ = 1.0;
};

/// Tube of hyperbolic radius R about the vertical axis.
struct Tube {
  double R = 1.0;
  explicit Tube(double radius = 1.0) : R(radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw std::invalid_argument("Tube: R must be finite and > 0");
  }
};

namespace detail {
inline void require_upper(const Point3& p, const char* who) {
  if (!(p.z > 0.0)) throw std::domain_error(std::string(who) + ": z coordinate must be positive");
}

// arcosh(1 + u) without forming 1 + u.
inline double acosh1p(double u) { return std::log1p(u + std::sqrt(u * (u + 2.0))); }
}  // namespace detail

inline double distance3(const Point3& p, const Point3& q) {
  detail::require_upper(p, "distance3");
  detail::require_upper(q, "distance3");
  // Symmetric in p and q: squares of differences and the product of heights.
  const double dx = p.x - q.x, dy = p.y - q.y, dz = p.z - q.z;
  const double u = (dx * dx + dy * dy + dz * dz) / (2.0 * (p.z * q.z));
  return detail::acosh1p(u);
}

inline Point3 gamma1(double t) { return AxisGeodesic{}(t); }

inline Point3 gamma2(double s, const CircleGeodesic& g) { return g(s); }

/// Distance to the full vertical geodesic: asinh of the Euclidean slope.
inline double dist_to_axis(const Point3& p) {
  detail::require_upper(p, "dist_to_axis");
  return std::asinh(std::hypot(p.x, p.y) / p.z);
}

/// Cone form of the tube: sqrt(x^2 + y^2) <= z sinh R.
inline bool tube_contains(const Point3& p, const Tube& tube) {
  detail::require_upper(p, "tube_contains");
  return std::hypot(p.x, p.y) <= p.z * std::sinh(tube.R);
}

struct TubeInterval {
  double u_minus;  ///< lower bound for e^{2s}
  double u_plus;   ///< upper bound for e^{2s}, +inf when the leading coefficient vanishes
};

/// Solutions of c2 u^2 - 2 b u + c0 <= 0 for u > 0, with c2, c0 >= 0.
/// Roots are formed without cancellation; c2 = 0 gives an unbounded interval.
inline std::optional<TubeInterval> positive_quadratic_interval(double c2, double b, double c0) {
  if (!(b > 0.0)) return std::nullopt;
  const double disc = b * b - c2 * c0;
  if (disc < 0.0) return std::nullopt;
  const double q = b + std::sqrt(disc);
  const double u_plus = c2 > 0.0 ? q / c2 : std::numeric_limits<double>::infinity();
  return TubeInterval{c0 / q, u_plus};
}

/// Range of e^{2s} over which gamma2(s) lies inside the tube.
inline std::optional<TubeInterval> tube_interval(const CircleGeodesic& g, const Tube& tube) {
  const double a = g.a(), r = g.r();
  const double ch = std::cosh(tube.R);
  const double b = 2.0 * ch * ch * r * r - r * r - a * a;
  return positive_quadratic_interval(g.d1_squared(), b, g.d2_squared());
}

}  // namespace hyperfold::geometry
