#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperfold/geometry.hpp"
#include "hyperfold/numeric/finite_difference.hpp"
#include "hyperfold/numeric/parallel.hpp"
#include "hyperfold/numeric/quadrature.hpp"
#include "hyperfold/phase.hpp"

namespace hyperfold::phase {

struct AdmissibilityReport {
  double phi_min = 0.0, phi_max = 0.0;            ///< after local refinement
  double phi_min_grid = 0.0, phi_max_grid = 0.0;  ///< dense-grid values
  double T = 0.0;
  bool segment_ok = false;     ///< r/(4 cosh T) <= e^s <= 4 r cosh T on I
  bool a_over_r_ok = false;    ///< a/r <= 2e cosh T
  bool d1_ok = false;          ///< d1 <= 2e cosh T
  bool r_lower_ok = false;     ///< r >= 1/(2 cosh T)

  bool admissible() const { return phi_min >= 2.0 && phi_max <= T; }

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (phi_min < 2.0) out.push_back("phi_min = " + std::to_string(phi_min) + " < 2");
    if (phi_max > T) out.push_back("phi_max = " + std::to_string(phi_max) + " > T = " + std::to_string(T));
    if (!segment_ok) out.push_back("segment bound r/(4 cosh T) <= e^s <= 4 r cosh T fails");
    if (!a_over_r_ok) out.push_back("bound a/r <= 2e cosh T fails");
    if (!d1_ok) out.push_back("bound d1 <= 2e cosh T fails");
    if (!r_lower_ok) out.push_back("bound r >= 1/(2 cosh T) fails");
    return out;
  }
};

namespace detail {

inline double grid_coord(double lo, double hi, std::size_t i, std::size_t n) {
  return n <= 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

// Minimizes f over a box by nested golden-section searches.
template <class F>
std::pair<double, double> box_minimize(F&& f, double t0, double t1, double s0, double s1) {
  const auto inner = [&](double t) {
    const double s = numeric::golden_section_min([&](double ss) { return f(t, ss); }, s0, s1, 1e-10);
    return std::pair{s, f(t, s)};
  };
  const double t = numeric::golden_section_min([&](double tt) { return inner(tt).second; }, t0, t1, 1e-10);
  return {t, inner(t).first};
}

}  // namespace detail

inline AdmissibilityReport admissibility(const PhaseParams& p, double T, std::size_t grid_n = 512) {
  if (grid_n < 2) throw std::invalid_argument("admissibility: grid_n must be at least 2");
  AdmissibilityReport rep;
  rep.T = T;
  const std::size_t n = grid_n;
  std::vector<double> values(n * n);
  numeric::parallel_for(n, [&](std::size_t i) {
    const double t = detail::grid_coord(0.0, 1.0, i, n);
    for (std::size_t j = 0; j < n; ++j) values[i * n + j] = phi(t, detail::grid_coord(p.s_lo, p.s_hi(), j, n), p);
  });
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  rep.phi_min_grid = *lo_it;
  rep.phi_max_grid = *hi_it;

  const double step = 1.0 / static_cast<double>(n - 1);
  const auto refine = [&](std::size_t index, double sign) {
    const std::size_t i = index / n, j = index % n;
    const double t = detail::grid_coord(0.0, 1.0, i, n), s = detail::grid_coord(p.s_lo, p.s_hi(), j, n);
    const auto f = [&](double tt, double ss) { return sign * phi(tt, ss, p); };
    const auto [tb, sb] = detail::box_minimize(f, std::max(0.0, t - step), std::min(1.0, t + step),
                                               std::max(p.s_lo, s - step), std::min(p.s_hi(), s + step));
    return std::min(sign * values[index], f(tb, sb)) * sign;
  };
  rep.phi_min = refine(static_cast<std::size_t>(lo_it - values.begin()), 1.0);
  rep.phi_max = refine(static_cast<std::size_t>(hi_it - values.begin()), -1.0);

  const double ch = std::cosh(T);
  rep.segment_ok = std::exp(p.s_lo) >= p.r / (4.0 * ch) && std::exp(p.s_hi()) <= 4.0 * p.r * ch;
  rep.a_over_r_ok = p.a / p.r <= 2.0 * std::numbers::e * ch;
  rep.d1_ok = p.d1 <= 2.0 * std::numbers::e * ch;
  rep.r_lower_ok = p.r >= 1.0 / (2.0 * ch);
  return rep;
}

/// Geometric stand-in for the group condition: the range of e^{2s} on which the
/// circle geodesic sits inside the tube must not cover
/// [r^2 / (16 cosh^2 T), 16 r^2 cosh^2 T].
inline bool tube_window_covered(const PhaseParams& p, double T, const geometry::Tube& tube) {
  const auto range = geometry::tube_interval(p.geodesic(), tube);
  if (!range) return false;
  const double ch = std::cosh(T);
  const double lo = p.r * p.r / (16.0 * ch * ch), hi = 16.0 * p.r * p.r * ch * ch;
  return range->u_minus <= lo && range->u_plus >= hi;
}

inline AdmissibilityReport require_admissible(const PhaseParams& p, double T, std::size_t grid_n,
                                              const std::optional<geometry::Tube>& tube) {
  auto rep = admissibility(p, T, grid_n);
  if (!rep.admissible()) {
    std::string msg = "inadmissible parameters:";
    for (const auto& v : rep.violations()) msg += " [" + v + "]";
    throw PreconditionError(msg);
  }
  if (tube && tube_window_covered(p, T, *tube))
    throw PreconditionError("tube interval covers the window [r^2/(16 cosh^2 T), 16 r^2 cosh^2 T]");
  return rep;
}

struct RegionMinimum {
  bool present = false;
  std::size_t count = 0;
  double minimum = std::numeric_limits<double>::infinity();
  double t = 0.0, s = 0.0;
  double implied_C = std::numeric_limits<double>::quiet_NaN();
};

struct Lemma1Audit {
  AdmissibilityReport admissibility;
  double T = 0.0, eps = 0.0;
  RegionMinimum nonstationary;  ///< inf |phi_st|
  RegionMinimum left_fold;      ///< inf |phi_st| / |t - t_c(s)|
  RegionMinimum right_fold;     ///< inf |phi_st| / |s - s_c(t)|
  std::size_t young_count = 0;

  bool all_positive() const {
    for (const auto* m : {&nonstationary, &left_fold, &right_fold})
      if (m->present && !(m->minimum > 0.0)) return false;
    return true;
  }
};

namespace detail {

inline double lemma1_metric(double t, double s, RegionLabel label, const PhaseParams& p,
                            const std::optional<CriticalCurves>& curves) {
  const double mixed = std::fabs(phi_st(t, s, p));
  if (label == RegionLabel::NonStationary) return mixed;
  const auto slope_t = [&](double tt) { return phi_st(tt, s, p); };
  const auto slope_s = [&](double ss) { return phi_st(t, ss, p); };
  if (label == RegionLabel::LeftFold) {
    const double tc = curves->t_c(s);
    if (std::fabs(t - tc) < 1e-7) return std::fabs(numeric::central4<double>(slope_t, tc, 1e-4));
    return mixed / std::fabs(t - tc);
  }
  const double sc = curves->s_c(t);
  if (std::fabs(s - sc) < 1e-7) return std::fabs(numeric::central4<double>(slope_s, sc, 1e-4));
  return mixed / std::fabs(s - sc);
}

}  // namespace detail

inline Lemma1Audit lemma1_audit(const PhaseParams& p, double T, double eps, std::size_t grid_n = 512,
                                const std::optional<geometry::Tube>& tube = geometry::Tube{1.0}) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("lemma1_audit: eps out of (0, 1)");
  Lemma1Audit audit;
  audit.admissibility = require_admissible(p, T, grid_n, tube);
  audit.T = T;
  audit.eps = eps;
  const auto z = zero_geometry(p);
  std::optional<CriticalCurves> curves;
  if (!z.empty) curves.emplace(z);

  const std::size_t n = grid_n;
  std::vector<RegionLabel> labels(n * n);
  std::vector<double> metric(n * n);
  numeric::parallel_for(n, [&](std::size_t i) {
    const double t = detail::grid_coord(0.0, 1.0, i, n);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = detail::grid_coord(p.s_lo, p.s_hi(), j, n);
      const auto label = classify_region(t, s, z, eps);
      labels[i * n + j] = label;
      metric[i * n + j] = label == RegionLabel::YoungPart ? 0.0 : detail::lemma1_metric(t, s, label, p, curves);
    }
  });

  const auto slot = [&](RegionLabel label) -> RegionMinimum* {
    switch (label) {
      case RegionLabel::NonStationary: return &audit.nonstationary;
      case RegionLabel::LeftFold: return &audit.left_fold;
      case RegionLabel::RightFold: return &audit.right_fold;
      default: return nullptr;
    }
  };
  for (std::size_t k = 0; k < n * n; ++k) {
    auto* m = slot(labels[k]);
    if (!m) {
      ++audit.young_count;
      continue;
    }
    m->present = true;
    ++m->count;
    if (metric[k] < m->minimum) {
      m->minimum = metric[k];
      m->t = detail::grid_coord(0.0, 1.0, k / n, n);
      m->s = detail::grid_coord(p.s_lo, p.s_hi(), k % n, n);
    }
  }

  // Half-step refinement around each minimizer, restricted to the same region.
  const double half = 0.5 / static_cast<double>(n - 1);
  for (auto label : {RegionLabel::NonStationary, RegionLabel::LeftFold, RegionLabel::RightFold}) {
    auto* m = slot(label);
    if (!m->present) continue;
    const double t0 = m->t, s0 = m->s;
    for (int di = -2; di <= 2; ++di) {
      for (int dj = -2; dj <= 2; ++dj) {
        const double t = t0 + di * half, s = s0 + dj * half;
        if (t < 0.0 || t > 1.0 || s < p.s_lo || s > p.s_hi()) continue;
        if (classify_region(t, s, z, eps) != label) continue;
        const double v = detail::lemma1_metric(t, s, label, p, curves);
        if (v < m->minimum) m->minimum = v, m->t = t, m->s = s;
      }
    }
    const double reference = label == RegionLabel::NonStationary ? eps * eps : eps;
    m->implied_C = -std::log(m->minimum / reference) / T;
  }
  return audit;
}

struct DerivativeSup {
  int order_t = 1, order_s = 1;
  double sup = 0.0;
  double implied_C = 0.0;  ///< ln(sup) / T
};

struct Lemma2Audit {
  AdmissibilityReport admissibility;
  double T = 0.0;
  std::vector<DerivativeSup> entries;  ///< mixed multi-indices only
  double sup_mixed_closed_form = 0.0;  ///< sup |phi_st| from the closed form
  double sup_mixed_numeric = 0.0;      ///< sup of the finite-difference oracle

  bool all_finite() const {
    for (const auto& e : entries)
      if (!std::isfinite(e.implied_C)) return false;
    return true;
  }
  double mixed_agreement() const {
    return std::fabs(sup_mixed_closed_form - sup_mixed_numeric) / sup_mixed_closed_form;
  }
};

/// d^{i+j} phi / dt^i ds^j for i, j >= 1, i + j <= 4: finite differences of the
/// closed-form mixed derivative.
inline double mixed_derivative(int i, int j, double t, double s, const PhaseParams& p, double h = 1e-3) {
  if (i < 1 || j < 1 || i + j > 4) throw std::invalid_argument("mixed_derivative: need i, j >= 1 and i + j <= 4");
  const auto f = [&p](double tt, double ss) { return phi_st(tt, ss, p); };
  const int di = i - 1, dj = j - 1;
  if (di == 0 && dj == 0) return f(t, s);
  if (di == 1 && dj == 1) return numeric::mixed_central4<double>(f, t, s, h);
  if (dj == 0) {
    const auto g = [&](double x) { return f(x, s); };
    return di == 1 ? numeric::central4<double>(g, t, h) : numeric::second_central4<double>(g, t, h);
  }
  const auto g = [&](double x) { return f(t, x); };
  return dj == 1 ? numeric::central4<double>(g, s, h) : numeric::second_central4<double>(g, s, h);
}

inline Lemma2Audit lemma2_audit(const PhaseParams& p, double T, int max_order = 4, std::size_t grid_n = 512,
                                const std::optional<geometry::Tube>& tube = geometry::Tube{1.0}, double fd_step = 0.0) {
  if (max_order < 2 || max_order > 4) throw std::invalid_argument("lemma2_audit: max_order must lie in [2, 4]");
  Lemma2Audit audit;
  audit.admissibility = require_admissible(p, T, grid_n, tube);
  audit.T = T;
  for (int total = 2; total <= max_order; ++total)
    for (int i = total - 1; i >= 1; --i) audit.entries.push_back({i, total - i, 0.0, 0.0});

  const std::size_t n = grid_n, m = audit.entries.size();
  std::vector<double> sups(n * (m + 1), 0.0);
  numeric::parallel_for(n, [&](std::size_t row) {
    const double t = detail::grid_coord(0.0, 1.0, row, n);
    double* out = &sups[row * (m + 1)];
    for (std::size_t j = 0; j < n; ++j) {
      const double s = detail::grid_coord(p.s_lo, p.s_hi(), j, n);
      for (std::size_t e = 0; e < m; ++e)
        out[e] = std::max(out[e], std::fabs(mixed_derivative(audit.entries[e].order_t, audit.entries[e].order_s, t, s, p)));
      out[m] = std::max(out[m], std::fabs(phi_st_numeric(t, s, p, fd_step).value));
    }
  });
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t e = 0; e < m; ++e) audit.entries[e].sup = std::max(audit.entries[e].sup, sups[row * (m + 1) + e]);
    audit.sup_mixed_numeric = std::max(audit.sup_mixed_numeric, sups[row * (m + 1) + m]);
  }
  for (auto& e : audit.entries) e.implied_C = std::log(e.sup) / T;
  audit.sup_mixed_closed_form = audit.entries.front().sup;
  return audit;
}

}  // namespace hyperfold::phase
