#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hyperfold/audits.hpp"
#include "hyperfold/numeric/lanczos.hpp"
#include "hyperfold/numeric/parallel.hpp"
#include "hyperfold/oscillatory.hpp"
#include "hyperfold/phase.hpp"

namespace hyperfold::osc {

using phase::RegionLabel;

/// 1 below center - width/2, 0 above center + width/2, squared cosine between.
inline double cos2_blend(double x, double center, double width) {
  const double lo = center - 0.5 * width;
  if (x <= lo) return 1.0;
  if (x >= center + 0.5 * width) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * (x - lo) / width);
  return c * c;
}

/// Smooth partition of unity subordinate to the four regions of classify_region.
/// Weights are ordered NonStationary, LeftFold, RightFold, YoungPart.
class RegionPartition {
 public:
  RegionPartition(const phase::ZeroSetGeometry& z, double eps) : z_(z), eps_(eps) {}

  std::array<double, 4> operator()(double t, double s) const {
    if (z_.empty) return {1.0, 0.0, 0.0, 0.0};
    const double dist = phase::distance_to_zero_set(t, s, z_, 2.0 * eps_);
    const double near = cos2_blend(dist, eps_, 0.5 * eps_);
    // signed distance outside the vertex bands
    const double out_s = std::max(z_.s_minus - s, s - z_.s_plus);
    const double out_t = std::max(z_.t_minus - t, t - z_.t_plus);
    const double left = 1.0 - cos2_blend(out_s, eps_, 0.5 * eps_);
    const double right = 1.0 - cos2_blend(out_t, eps_, 0.5 * eps_);
    return {1.0 - near, near * left, near * (1.0 - left) * right, near * (1.0 - left) * (1.0 - right)};
  }

 private:
  phase::ZeroSetGeometry z_;
  double eps_;
};

inline constexpr std::array<RegionLabel, 4> kRegionOrder{RegionLabel::NonStationary, RegionLabel::LeftFold,
                                                         RegionLabel::RightFold, RegionLabel::YoungPart};

struct RegionPiece {
  RegionLabel label = RegionLabel::NonStationary;
  double measure = 0.0;    ///< integral of the partition weight
  double norm = 0.0;       ///< operator norm of the localized piece
  double reference = 0.0;  ///< eps lambda, eps^-2 lambda^3/4 or eps^-4 lambda^1/2
  double implied_C = -std::numeric_limits<double>::infinity();  ///< ln(norm / reference) / T
};

struct CompositeAudit {
  double lambda = 0.0, T = 0.0, eps = 0.0;
  std::size_t n_nodes = 0;
  std::array<RegionPiece, 4> pieces{};
  double young_schur = 0.0;  ///< Schur-test bound for the Young piece
  double total = 0.0;
  double reference = 0.0;  ///< eps lambda + eps^-2 lambda^3/4 + eps^-4 lambda^1/2
  double implied_C = -std::numeric_limits<double>::infinity();
  double partition_error = 0.0;  ///< max |sum of weights - 1| on the grid

  bool passed(double C_max = 25.0) const {
    return implied_C <= C_max && partition_error <= 1e-12 && pieces[3].norm <= young_schur * (1.0 + 1e-9) + 1e-300;
  }
};

struct CompositeOptions {
  std::size_t n_nodes = 0;  ///< 0: resolution rule
  std::size_t admissibility_grid = 512;
  std::optional<geometry::Tube> tube = geometry::Tube{1.0};
  NormOptions norm{};
};

/// Localizes the model kernel a(phi) e^{i lambda phi} to the four regions on
/// [0,1] x I and bounds each piece's operator norm.
inline CompositeAudit composite_bound_audit(const phase::PhaseParams& p, double lambda, double T, double eps,
                                            const CompositeOptions& opt = {}) {
  if (!(lambda > 0.0)) throw std::invalid_argument("composite_bound_audit: lambda must be positive");
  if (!(eps > 0.0 && eps < 0.25)) throw std::invalid_argument("composite_bound_audit: eps out of (0, 1/4)");
  phase::require_admissible(p, T, opt.admissibility_grid, opt.tube);

  CompositeAudit audit;
  audit.lambda = lambda;
  audit.T = T;
  audit.eps = eps;
  const Rect box{0.0, 1.0, p.s_lo, p.s_hi()};
  const Phase ph = hyperbolic_phase(p);
  const ModelAmplitude model{T, lambda};
  const auto grad = gradient_sup(ph, box);
  const std::size_t rule = nodes_per_oscillation_rule(lambda, std::hypot(grad[0], grad[1]), 1.0);
  const std::size_t n = opt.n_nodes ? opt.n_nodes : std::max<std::size_t>(256, rule);
  if (n < rule) throw ResolutionError("composite_bound_audit: grid under-resolves the phase", rule);
  audit.n_nodes = n;

  const RegionPartition partition(phase::zero_geometry(p), eps);
  const double dt = 1.0 / static_cast<double>(n), ds = 1.0 / static_cast<double>(n);
  const double w = std::sqrt(dt * ds);
  std::vector<complex> kernel(n * n);
  std::vector<std::array<double, 4>> weights(n * n);
  std::vector<double> row_error(n, 0.0);
  numeric::parallel_for(n, [&](std::size_t i) {
    const double t = (static_cast<double>(i) + 0.5) * dt;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = p.s_lo + (static_cast<double>(j) + 0.5) * ds;
      const double phi = phase::phi(t, s, p);
      kernel[i * n + j] = w * model(phi) * std::polar(1.0, lambda * phi);
      const auto wt = partition(t, s);
      weights[i * n + j] = wt;
      row_error[i] = std::max(row_error[i], std::fabs(wt[0] + wt[1] + wt[2] + wt[3] - 1.0));
    }
  });
  for (double e : row_error) audit.partition_error = std::max(audit.partition_error, e);

  const std::array<double, 4> references{std::pow(eps, -4.0) * std::sqrt(lambda),
                                         std::pow(eps, -2.0) * std::pow(lambda, 0.75),
                                         std::pow(eps, -2.0) * std::pow(lambda, 0.75), eps * lambda};
  std::vector<complex> y(n);
  for (std::size_t k = 0; k < 4; ++k) {
    RegionPiece& piece = audit.pieces[k];
    piece.label = kRegionOrder[k];
    piece.reference = references[k];
    double measure = 0.0;
    for (const auto& wt : weights) measure += wt[k];
    piece.measure = measure * dt * ds;
    if (measure == 0.0) continue;
    const auto gram = [&](const complex* x, complex* out) {
      numeric::parallel_for(n, [&](std::size_t i) {
        complex acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += weights[i * n + j][k] * kernel[i * n + j] * x[j];
        y[i] = acc;
      });
      numeric::parallel_for(n, [&](std::size_t j) {
        complex acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += weights[i * n + j][k] * std::conj(kernel[i * n + j]) * y[i];
        out[j] = acc;
      });
    };
    const auto res = numeric::largest_eigenvalue(n, gram, opt.norm.lanczos);
    piece.norm = std::sqrt(std::max(0.0, res.value));
    if (piece.norm > 0.0) piece.implied_C = std::log(piece.norm / piece.reference) / T;
    audit.total += piece.norm;
  }

  double row_max = 0.0, col_max = 0.0;
  std::vector<double> col(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = weights[i * n + j][3] * std::abs(kernel[i * n + j]);
      row += v;
      col[j] += v;
    }
    row_max = std::max(row_max, row);
  }
  for (double c : col) col_max = std::max(col_max, c);
  audit.young_schur = std::sqrt(row_max * col_max);

  audit.reference = references[0] + references[1] + references[3];
  if (audit.total > 0.0) audit.implied_C = std::log(audit.total / audit.reference) / T;
  return audit;
}

struct AssembledBound {
  double lambda = 0.0, T = 0.0, eps = 0.0;
  double bound = 0.0;  ///< lambda/T (tube) + lambda/T (K_0) + e^{CT}(eps lambda + eps^-2 lambda^3/4 + eps^-4 lambda^1/2)
  double ratio = 0.0;  ///< bound / (lambda / ln lambda)
};

/// Final assembly with T = c ln lambda and eps = e^{-CT} / T.
inline AssembledBound assembled_bound(double lambda, double c, double C) {
  if (!(lambda > 1.0) || !(c > 0.0) || !(C > 0.0))
    throw std::invalid_argument("assembled_bound: need lambda > 1, c > 0, C > 0");
  AssembledBound out;
  out.lambda = lambda;
  out.T = c * std::log(lambda);
  out.eps = std::exp(-C * out.T) / out.T;
  const double e = out.eps;
  const double osc =
      std::exp(C * out.T) * (e * lambda + std::pow(e, -2.0) * std::pow(lambda, 0.75) + std::pow(e, -4.0) * std::sqrt(lambda));
  out.bound = 2.0 * lambda / out.T + osc;
  out.ratio = out.bound / (lambda / std::log(lambda));
  return out;
}

/// The admissible c of the parameter law, c = 1 / (24 C): half the threshold 1 / (12 C).
inline double default_log_coefficient(double C) { return 1.0 / (24.0 * C); }

}  // namespace hyperfold::osc
