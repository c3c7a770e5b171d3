#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hyperfold/geometry.hpp"
#include "hyperfold/numeric/finite_difference.hpp"

namespace hyperfold::phase {

/// Raised when an evaluation or audit is run outside the regime its inequalities assume.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters of the circle geodesic paired with the vertical axis, plus the
/// unit interval I = [s_lo, s_lo + 1] traced on it.
struct PhaseParams {
  double a = 0.0;
  double r = 1.0;
  double beta = std::numbers::pi / 2;
  double cos_beta = 0.0;
  double sin_beta = 1.0;
  double d1 = 1.0;
  double d2 = 1.0;
  double s_lo = 0.0;

  static PhaseParams make(double a, double r, double beta, double s_offset = 0.0) {
    const geometry::CircleGeodesic g(a, r, beta);
    if (!std::isfinite(s_offset)) throw std::invalid_argument("PhaseParams: s offset must be finite");
    PhaseParams p;
    p.a = a;
    p.r = r;
    p.beta = beta;
    p.cos_beta = g.cos_beta();
    p.sin_beta = g.sin_beta();
    p.d1 = std::sqrt(g.d1_squared());
    p.d2 = std::sqrt(g.d2_squared());
    p.s_lo = s_offset;
    return p;
  }

  geometry::CircleGeodesic geodesic() const { return {a, r, beta}; }
  double s_hi() const { return s_lo + 1.0; }
  double d1_squared() const { return geodesic().d1_squared(); }
  double d2_squared() const { return geodesic().d2_squared(); }
};

/// cosh(phi) - 1 from the Euclidean separation, free of cancellation.
template <std::floating_point Real = double>
Real cosh_phi_minus_one(Real t, Real s, const PhaseParams& p) {
  using std::cosh, std::exp, std::tanh;
  const Real th = tanh(s);
  const Real x = Real(p.a) - th * Real(p.r) * Real(p.cos_beta);
  const Real y = -th * Real(p.r) * Real(p.sin_beta);
  const Real z2 = Real(p.r) / cosh(s);
  const Real z1 = exp(t);
  const Real dz = z1 - z2;
  return (x * x + y * y + dz * dz) / (2 * z1 * z2);
}

/// Hyperbolic distance between gamma1(t) and gamma2(s).
template <std::floating_point Real = double>
Real phi(Real t, Real s, const PhaseParams& p) {
  using std::log1p, std::sqrt;
  const Real u = cosh_phi_minus_one<Real>(t, s, p);
  return log1p(u + sqrt(u * (u + 2)));
}

/// A = e^{2s+2t} + e^{2t} + d1^2 e^{2s} + d2^2, so that e^{s+t} cosh(phi) = A/(4r).
inline double phase_A(double t, double s, const PhaseParams& p) {
  const double X = std::exp(2.0 * t), Y = std::exp(2.0 * s);
  return X * Y + X + p.d1_squared() * Y + p.d2_squared();
}

namespace detail {
struct MixedParts {
  double numerator;  // bracket of the closed form
  double magnitude;  // same bracket with absolute values of both products
  double factor;     // 16 r e^{2s+2t} / E^{3/2}
};

inline MixedParts mixed_parts(double t, double s, const PhaseParams& p) {
  const double X = std::exp(2.0 * t), Y = std::exp(2.0 * s);
  const double e = std::exp(s + t);
  const double ac = p.a * p.cos_beta;
  const double first = (ac - p.r) * (X * Y + p.d2_squared());
  const double second = (ac + p.r) * (X + p.d1_squared() * Y);
  // E = (A - 4re^{s+t})(A + 4re^{s+t}) = 16 r^2 e^{2s+2t} u (u + 2), u = cosh(phi) - 1.
  const double u = cosh_phi_minus_one<double>(t, s, p);
  if (!(u > 0.0)) throw std::domain_error("phi_st: coincident points, denominator vanishes");
  const double sinh2 = u * (u + 2.0);
  const double E = 16.0 * p.r * p.r * e * e * sinh2;
  const double factor = 16.0 * p.r * e * e / (E * std::sqrt(E));
  return {first + second, std::fabs(first) + std::fabs(second), factor};
}
}  // namespace detail

/// Closed-form mixed derivative d^2 phi / dt ds.
inline double phi_st(double t, double s, const PhaseParams& p) {
  const auto m = detail::mixed_parts(t, s, p);
  return m.factor * m.numerator;
}

/// Size of the two competing contributions to phi_st; relative errors near
/// the zero set are measured against this.
inline double phi_st_scale(double t, double s, const PhaseParams& p) {
  const auto m = detail::mixed_parts(t, s, p);
  return m.factor * m.magnitude;
}

struct NumericDerivative {
  double value = 0.0;
  bool step_warning = false;  ///< h is below the rounding-noise floor
};

inline constexpr double kDefaultStep = 1e-3;

/// Fourth-order mixed central difference of phi with one Richardson level,
/// evaluated in extended precision.
inline NumericDerivative phi_st_numeric(double t, double s, const PhaseParams& p, double h = 0.0) {
  if (h == 0.0) h = std::max(kDefaultStep, std::fabs(t) * kDefaultStep);
  if (!(h > 0.0)) throw std::invalid_argument("phi_st_numeric: step must be positive");
  using ld = long double;
  const auto f = [&p](ld tt, ld ss) { return phi<ld>(tt, ss, p); };
  const ld value = numeric::mixed_richardson<ld>(f, ld(t), ld(s), ld(h));
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::fabs(t), std::fabs(s)});
  return {static_cast<double>(value), h < floor};
}

/// Geometry of the zero set Z = {(e^{2t} - X0)(e^{2s} - Y0) = B} of phi_st.
struct ZeroSetGeometry {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  double X0 = kNaN, Y0 = kNaN, B = kNaN;
  double t_plus = kNaN, t_minus = kNaN;
  double s_plus = kNaN, s_minus = kNaN;
  /// ln sqrt X0, ln sqrt(X0 - B/Y0), ln sqrt Y0, ln sqrt(Y0 - B/X0)
  std::array<double, 4> asymptotes{kNaN, kNaN, kNaN, kNaN};
  bool empty = true;

  /// F(t, s) = (e^{2t} - X0)(e^{2s} - Y0) - B
  double F(double t, double s) const { return (std::exp(2.0 * t) - X0) * (std::exp(2.0 * s) - Y0) - B; }
};

inline ZeroSetGeometry zero_geometry(const PhaseParams& p) {
  ZeroSetGeometry z;
  const double ac = p.a * p.cos_beta;
  if (p.r <= ac) return z;
  z.empty = false;
  const double gap = p.r - ac;
  z.Y0 = (p.r + ac) / gap;
  z.X0 = p.d1_squared() * z.Y0;
  z.B = 4.0 * p.a * p.a * p.a * p.r * p.cos_beta * p.sin_beta * p.sin_beta / (gap * gap);
  // vertices sit at X0 (1 +- q), Y0 (1 +- q); 1 - q = d2^2 / (X0 Y0 (1 + q)) avoids cancellation
  const double q = std::sqrt(z.B / (z.X0 * z.Y0));
  const double up = 0.5 * std::log1p(q);
  const double down = 0.5 * (std::log(p.d2_squared() / (z.X0 * z.Y0)) - std::log1p(q));
  z.s_plus = 0.5 * std::log(z.Y0) + up;
  z.s_minus = 0.5 * std::log(z.Y0) + down;
  z.t_plus = 0.5 * std::log(z.X0) + up;
  z.t_minus = 0.5 * std::log(z.X0) + down;
  z.asymptotes = {0.5 * std::log(z.X0), 0.5 * std::log(z.X0 - z.B / z.Y0), 0.5 * std::log(z.Y0),
                  0.5 * std::log(z.Y0 - z.B / z.X0)};
  return z;
}

/// The two graph descriptions t = t_c(s), s = s_c(t) of Z away from the vertex band.
class CriticalCurves {
 public:
  explicit CriticalCurves(const ZeroSetGeometry& z) : z_(z) {
    if (z.empty) throw std::domain_error("critical_curves: zero set is empty");
  }

  double t_c(double s) const {
    if (s >= z_.s_minus && s <= z_.s_plus) throw std::domain_error("t_c: s inside the vertex band [s-, s+]");
    return 0.5 * std::log(z_.X0 + z_.B / (std::exp(2.0 * s) - z_.Y0));
  }

  double s_c(double t) const {
    if (t >= z_.t_minus && t <= z_.t_plus) throw std::domain_error("s_c: t inside the vertex band [t-, t+]");
    return 0.5 * std::log(z_.Y0 + z_.B / (std::exp(2.0 * t) - z_.X0));
  }

  const ZeroSetGeometry& geometry() const { return z_; }

 private:
  ZeroSetGeometry z_;
};

inline CriticalCurves critical_curves(const PhaseParams& p) { return CriticalCurves(zero_geometry(p)); }

/// Roots e^{2 tau-} <= e^{2 tau+} of the bracket restricted to the line s - t = delta,
/// where the bracket equals (a cos beta - r) e^{2 delta} (e^{2t} - e^{2 tau-})(e^{2t} - e^{2 tau+}).
struct DiagonalRoots {
  double lower, upper;
};

inline DiagonalRoots restriction_roots(const ZeroSetGeometry& z, double delta) {
  const double w = std::exp(-2.0 * delta);
  const double sum = z.X0 + z.Y0 * w;
  const double diff = z.X0 - z.Y0 * w;
  const double root = std::sqrt(diff * diff + 4.0 * z.B * w);
  const double upper = 0.5 * (sum + root);
  // product of the roots is X0 Y0 w - B w = d2^2 w
  const double lower = (z.X0 * z.Y0 - z.B) * w / upper;
  return {lower, upper};
}

/// epsilon0 = 1/2 ln(1 + sqrt(B / (X0 Y0))) + eps, so that s > s+ + eps iff e^{2s} > Y0 e^{2 epsilon0}.
inline double epsilon0(const ZeroSetGeometry& z, double eps) {
  return 0.5 * std::log1p(std::sqrt(z.B / (z.X0 * z.Y0))) + eps;
}

enum class RegionLabel { NonStationary, LeftFold, RightFold, YoungPart };

inline const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::NonStationary: return "NonStationary";
    case RegionLabel::LeftFold: return "LeftFold";
    case RegionLabel::RightFold: return "RightFold";
    case RegionLabel::YoungPart: return "YoungPart";
  }
  return "?";
}

/// Distance from (t, s) to Z in the (t, s) plane. Exact when B = 0; otherwise
/// |F|/|grad F| refined by Newton projection once it is below `refine_within`.
inline double distance_to_zero_set(double t, double s, const ZeroSetGeometry& z, double refine_within) {
  if (z.empty) return std::numeric_limits<double>::infinity();
  if (z.B == 0.0) return std::min(std::fabs(t - z.asymptotes[0]), std::fabs(s - z.asymptotes[2]));
  const auto grad = [&z](double tt, double ss) {
    const double X = std::exp(2.0 * tt), Y = std::exp(2.0 * ss);
    return std::array<double, 2>{2.0 * X * (Y - z.Y0), 2.0 * Y * (X - z.X0)};
  };
  auto g = grad(t, s);
  double gn = std::hypot(g[0], g[1]);
  const double estimate = gn > 0.0 ? std::fabs(z.F(t, s)) / gn : std::numeric_limits<double>::infinity();
  if (estimate > refine_within && gn > 1e-300) return estimate;
  double pt = t, ps = s;
  if (!(gn > 1e-300)) pt += 1e-8, ps += 1e-8;  // centre of the hyperbola: nudge off the critical point
  for (int k = 0; k < 5; ++k) {
    g = grad(pt, ps);
    const double n2 = g[0] * g[0] + g[1] * g[1];
    if (!(n2 > 0.0)) break;
    const double f = z.F(pt, ps);
    pt -= f * g[0] / n2;
    ps -= f * g[1] / n2;
  }
  const double projected = std::hypot(pt - t, ps - s);
  return std::isfinite(projected) ? projected : estimate;
}

inline RegionLabel classify_region(double t, double s, const ZeroSetGeometry& z, double eps) {
  if (z.empty) return RegionLabel::NonStationary;
  if (distance_to_zero_set(t, s, z, 2.0 * eps) > eps) return RegionLabel::NonStationary;
  if (s > z.s_plus + eps || s < z.s_minus - eps) return RegionLabel::LeftFold;
  if (t > z.t_plus + eps || t < z.t_minus - eps) return RegionLabel::RightFold;
  return RegionLabel::YoungPart;
}

inline RegionLabel classify_region(double t, double s, const PhaseParams& p, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("classify_region: eps out of (0, 1)");
  return classify_region(t, s, zero_geometry(p), eps);
}

}  // namespace hyperfold::phase
