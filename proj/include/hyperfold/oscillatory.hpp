#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperfold/numeric/fft.hpp"
#include "hyperfold/numeric/finite_difference.hpp"
#include "hyperfold/numeric/lanczos.hpp"
#include "hyperfold/numeric/parallel.hpp"
#include "hyperfold/numeric/quadrature.hpp"
#include "hyperfold/phase.hpp"

namespace hyperfold::osc {

using complex = std::complex<double>;

struct Rect {
  double t_lo = 0.0, t_hi = 1.0, s_lo = 0.0, s_hi = 1.0;
  double t_length() const { return t_hi - t_lo; }
  double s_length() const { return s_hi - s_lo; }
  double diameter() const { return std::hypot(t_length(), s_length()); }
};

/// A real phase phi(t, s). When the phase is affine in s,
/// phi = slope(t) s + t_part(t) + s_part(s), the split is recorded so that the
/// Gram operator of T_lambda becomes Toeplitz on a uniform s-grid.
struct Phase {
  std::function<double(double, double)> value;
  std::function<double(double, double)> mixed;  ///< closed-form phi_st if known
  std::function<double(double)> slope, t_part, s_part;

  bool affine_in_s() const { return static_cast<bool>(slope); }
  double operator()(double t, double s) const { return value(t, s); }

  double mixed_derivative(double t, double s) const {
    if (mixed) return mixed(t, s);
    return numeric::mixed_richardson<double>(value, t, s, 1e-3);
  }
};

inline Phase general_phase(std::function<double(double, double)> f,
                           std::function<double(double, double)> mixed = {}) {
  Phase p;
  p.value = std::move(f);
  p.mixed = std::move(mixed);
  return p;
}

inline Phase affine_phase(std::function<double(double)> slope, std::function<double(double)> t_part,
                          std::function<double(double)> s_part, std::function<double(double, double)> mixed = {}) {
  Phase p;
  p.slope = slope;
  p.t_part = t_part;
  p.s_part = s_part;
  p.value = [slope, t_part, s_part](double t, double s) { return slope(t) * s + t_part(t) + s_part(s); };
  p.mixed = std::move(mixed);
  return p;
}

/// phi = t s
inline Phase nondegenerate_phase() {
  const auto zero = [](double) { return 0.0; };
  return affine_phase([](double t) { return t; }, zero, zero, [](double, double) { return 1.0; });
}

/// phi = (t - 1/2)^2 s: phi_st = 2(t - 1/2) vanishes to first order on t = 1/2.
inline Phase fold_phase() {
  const auto zero = [](double) { return 0.0; };
  return affine_phase([](double t) { return (t - 0.5) * (t - 0.5); }, zero, zero,
                      [](double t, double) { return 2.0 * (t - 0.5); });
}

/// phi = t + s: the kernel factorizes.
inline Phase separable_phase() {
  return affine_phase([](double) { return 0.0; }, [](double t) { return t; }, [](double s) { return s; },
                      [](double, double) { return 0.0; });
}

/// The two-geodesic distance phase.
inline Phase hyperbolic_phase(const phase::PhaseParams& p) {
  return general_phase([p](double t, double s) { return phase::phi(t, s, p); },
                       [p](double t, double s) { return phase::phi_st(t, s, p); });
}

/// C-infinity bump on (lo, hi) with peak value 1 at the midpoint.
inline double bump(double x, double lo, double hi) {
  const double y = (2.0 * x - lo - hi) / (hi - lo);
  const double q = 1.0 - y * y;
  return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}

struct Amplitude {
  std::function<double(double, double)> value;
  Rect support;
  std::array<double, 3> dt_sup{};  ///< sup |d_t^i a|, i = 0, 1, 2
  std::array<double, 3> ds_sup{};  ///< sup |d_s^i a|
  std::function<double(double)> t_factor, s_factor;  ///< set when a = t_factor(t) s_factor(s)

  bool separable() const { return static_cast<bool>(t_factor) && static_cast<bool>(s_factor); }
  double operator()(double t, double s) const { return value(t, s); }
};

namespace detail {

inline std::array<std::array<double, 3>, 2> sample_sup_norms(const std::function<double(double, double)>& a,
                                                             const Rect& box, std::size_t n = 257) {
  std::array<std::array<double, 3>, 2> sup{};
  const double ht = box.t_length() / 2048.0, hs = box.s_length() / 2048.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = box.t_lo + box.t_length() * static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = box.s_lo + box.s_length() * static_cast<double>(j) / static_cast<double>(n - 1);
      const auto ft = [&](double x) { return a(x, s); };
      const auto fs = [&](double x) { return a(t, x); };
      const double v = std::fabs(a(t, s));
      sup[0][0] = std::max(sup[0][0], v);
      sup[1][0] = sup[0][0];
      sup[0][1] = std::max(sup[0][1], std::fabs(numeric::central4<double>(ft, t, ht)));
      sup[0][2] = std::max(sup[0][2], std::fabs(numeric::second_central4<double>(ft, t, ht)));
      sup[1][1] = std::max(sup[1][1], std::fabs(numeric::central4<double>(fs, s, hs)));
      sup[1][2] = std::max(sup[1][2], std::fabs(numeric::second_central4<double>(fs, s, hs)));
    }
  }
  return sup;
}

}  // namespace detail

/// Amplitude with sup norms estimated on a grid (5% margin) unless supplied.
inline Amplitude make_amplitude(std::function<double(double, double)> a, const Rect& support,
                                std::optional<std::array<double, 3>> dt_sup = std::nullopt,
                                std::optional<std::array<double, 3>> ds_sup = std::nullopt) {
  Amplitude amp;
  amp.value = std::move(a);
  amp.support = support;
  if (!dt_sup || !ds_sup) {
    const auto sup = detail::sample_sup_norms(amp.value, support);
    for (int i = 0; i < 3; ++i) {
      amp.dt_sup[i] = 1.05 * sup[0][i];
      amp.ds_sup[i] = 1.05 * sup[1][i];
    }
  }
  if (dt_sup) amp.dt_sup = *dt_sup;
  if (ds_sup) amp.ds_sup = *ds_sup;
  return amp;
}

inline Amplitude separable_amplitude(std::function<double(double)> ft, std::function<double(double)> fs,
                                     const Rect& support) {
  Amplitude amp = make_amplitude([ft, fs](double t, double s) { return ft(t) * fs(s); }, support);
  amp.t_factor = std::move(ft);
  amp.s_factor = std::move(fs);
  return amp;
}

/// bump(t) bump(s) on the given rectangle.
inline Amplitude bump_amplitude(const Rect& support = {}) {
  const Rect box = support;
  return separable_amplitude([box](double t) { return bump(t, box.t_lo, box.t_hi); },
                             [box](double s) { return bump(s, box.s_lo, box.s_hi); }, box);
}

/// Samples at the midpoints of n equal cells of [lo, hi].
struct SampledFunction {
  double lo = 0.0, hi = 1.0;
  std::vector<complex> values;

  std::size_t size() const { return values.size(); }
  double step() const { return (hi - lo) / static_cast<double>(values.size()); }
  double node(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * step(); }
  double l2_norm() const {
    double acc = 0.0;
    for (const auto& v : values) acc += std::norm(v);
    return std::sqrt(acc * step());
  }
};

template <class F>
SampledFunction sample(F&& f, double lo, double hi, std::size_t n) {
  SampledFunction out{lo, hi, std::vector<complex>(n)};
  for (std::size_t i = 0; i < n; ++i) out.values[i] = f(out.node(i));
  return out;
}

inline complex inner_product(const SampledFunction& f, const SampledFunction& g) {
  if (f.size() != g.size()) throw std::invalid_argument("inner_product: grids differ");
  complex acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f.values[i] * std::conj(g.values[i]);
  return acc * f.step();
}

class ResolutionError : public std::invalid_argument {
 public:
  ResolutionError(const std::string& what, std::size_t required)
      : std::invalid_argument(what + " (need at least " + std::to_string(required) + " nodes)"), required_(required) {}
  std::size_t required() const { return required_; }

 private:
  std::size_t required_;
};

/// sup |d_t phi|, sup |d_s phi| over a rectangle, by sampled central differences.
inline std::array<double, 2> gradient_sup(const Phase& phase, const Rect& box, std::size_t n = 65) {
  std::array<double, 2> sup{0.0, 0.0};
  const double ht = 1e-5 * std::max(1.0, box.t_length()), hs = 1e-5 * std::max(1.0, box.s_length());
  for (std::size_t i = 0; i < n; ++i) {
    const double t = box.t_lo + box.t_length() * static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = box.s_lo + box.s_length() * static_cast<double>(j) / static_cast<double>(n - 1);
      sup[0] = std::max(sup[0], std::fabs((phase(t + ht, s) - phase(t - ht, s)) / (2 * ht)));
      sup[1] = std::max(sup[1], std::fabs((phase(t, s + hs) - phase(t, s - hs)) / (2 * hs)));
    }
  }
  return sup;
}

/// Eight nodes per oscillation of frequency lambda * slope over a length.
inline std::size_t nodes_per_oscillation_rule(double lambda, double slope, double length) {
  return static_cast<std::size_t>(std::ceil(8.0 * lambda * slope * length / (2.0 * std::numbers::pi)));
}

/// (T f)(t_i) = sum_j e^{i lambda phi(t_i, s_j)} a(t_i, s_j) f(s_j) ds at n_out
/// midpoints of the amplitude's t-range.
inline SampledFunction apply_T_lambda(const SampledFunction& f, const Phase& phase, const Amplitude& amp,
                                      double lambda, std::size_t n_out = 0) {
  if (!(lambda > 0.0)) throw std::invalid_argument("apply_T_lambda: lambda must be positive");
  if (f.size() == 0) throw std::invalid_argument("apply_T_lambda: empty input");
  const Rect box{amp.support.t_lo, amp.support.t_hi, f.lo, f.hi};
  const std::size_t required = nodes_per_oscillation_rule(lambda, gradient_sup(phase, box)[1], f.hi - f.lo);
  if (f.size() < required) throw ResolutionError("apply_T_lambda: input sampling under-resolves the phase", required);
  if (n_out == 0) n_out = f.size();
  SampledFunction out{amp.support.t_lo, amp.support.t_hi, std::vector<complex>(n_out)};
  const double ds = f.step();
  numeric::parallel_for(n_out, [&](std::size_t i) {
    const double t = out.node(i);
    complex acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double s = f.node(j);
      const double a = amp(t, s);
      if (a != 0.0) acc += a * std::polar(1.0, lambda * phase(t, s)) * f.values[j];
    }
    out.values[i] = acc * ds;
  });
  return out;
}

/// (T* g)(s_j) = sum_i e^{-i lambda phi(t_i, s_j)} a(t_i, s_j) g(t_i) dt on n_out
/// midpoints of [s_lo, s_hi].
inline SampledFunction apply_T_lambda_adjoint(const SampledFunction& g, const Phase& phase, const Amplitude& amp,
                                              double lambda, double s_lo, double s_hi, std::size_t n_out) {
  SampledFunction out{s_lo, s_hi, std::vector<complex>(n_out)};
  const double dt = g.step();
  numeric::parallel_for(n_out, [&](std::size_t j) {
    const double s = out.node(j);
    complex acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = g.node(i);
      const double a = amp(t, s);
      if (a != 0.0) acc += a * std::polar(1.0, -lambda * phase(t, s)) * g.values[i];
    }
    out.values[j] = acc * dt;
  });
  return out;
}

/// K(s, s') = int e^{i lambda (phi(t, s) - phi(t, s'))} a(t, s) a(t, s') dt.
/// The Gram operator T*T acts by (T*T f)(s) = int conj(K(s, s')) f(s') ds'.
inline complex ttstar_kernel(double s, double s_prime, const Phase& phase, const Amplitude& amp, double lambda) {
  const double lo = amp.support.t_lo, hi = amp.support.t_hi;
  double variation = 0.0, prev = 0.0;
  for (int k = 0; k <= 256; ++k) {
    const double t = lo + (hi - lo) * k / 256.0;
    const double d = phase(t, s) - phase(t, s_prime);
    if (k > 0) variation += std::fabs(d - prev);
    prev = d;
  }
  const auto panels = static_cast<std::size_t>(16 + std::ceil(4.0 * lambda * variation / (2.0 * std::numbers::pi)));
  return numeric::integrate(
      [&](double t) {
        return amp(t, s) * amp(t, s_prime) * std::polar(1.0, lambda * (phase(t, s) - phase(t, s_prime)));
      },
      lo, hi, panels, 16);
}

struct NormOptions {
  numeric::LanczosOptions lanczos{};
  std::size_t dense_limit = std::size_t{1} << 24;  ///< largest matrix (entries) held in memory
};

enum class NormPath { Toeplitz, Dense, MatrixFree };

struct NormEstimate {
  double value = 0.0;
  std::size_t n_nodes = 0;
  int iterations = 0;
  NormPath path = NormPath::Dense;
};

inline std::size_t required_nodes(const Phase& phase, const Amplitude& amp, double lambda) {
  const auto g = gradient_sup(phase, amp.support);
  const double length = std::max(amp.support.t_length(), amp.support.s_length());
  return nodes_per_oscillation_rule(lambda, std::hypot(g[0], g[1]), length);
}

namespace detail {

// Gram operator of the separable, affine-in-s case: Toeplitz between diagonal factors.
class ToeplitzGram {
 public:
  ToeplitzGram(const Phase& phase, const Amplitude& amp, double lambda, std::size_t n) : n_(n) {
    const Rect& box = amp.support;
    const double dt = box.t_length() / static_cast<double>(n), ds = box.s_length() / static_cast<double>(n);
    std::vector<double> weight(n), freq(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = box.t_lo + (static_cast<double>(i) + 0.5) * dt;
      const double a = amp.t_factor(t);
      weight[i] = dt * a * a;
      freq[i] = lambda * phase.slope(t) * ds;
    }
    // c_m = sum_i weight_i e^{i freq_i m}, by blocks re-anchored with exact exponentials.
    std::vector<complex> c(n);
    constexpr std::size_t block = 256;
    const std::size_t blocks = (n + block - 1) / block;
    numeric::parallel_for(blocks, [&](std::size_t b) {
      const std::size_t m0 = b * block, m1 = std::min(n, m0 + block);
      std::vector<double> cr(n), ci(n), zr(n), zi(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double angle = freq[i] * static_cast<double>(m0);
        cr[i] = weight[i] * std::cos(angle);
        ci[i] = weight[i] * std::sin(angle);
        zr[i] = std::cos(freq[i]);
        zi[i] = std::sin(freq[i]);
      }
      for (std::size_t m = m0; m < m1; ++m) {
        double sr = 0.0, si = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          sr += cr[i];
          si += ci[i];
          const double nr = cr[i] * zr[i] - ci[i] * zi[i];
          ci[i] = cr[i] * zi[i] + ci[i] * zr[i];
          cr[i] = nr;
        }
        c[m] = {sr, si};
      }
    });
    // (G x)_j = ds conj(b_j) sum_k c_{k - j} b_k x_k, a Toeplitz product with d[m] = c_{-m}.
    std::vector<complex> diagonals(2 * n - 1);
    for (std::size_t m = 0; m < n; ++m) {
      diagonals[n - 1 + m] = std::conj(c[m]);
      diagonals[n - 1 - m] = c[m];
    }
    toeplitz_.emplace(n, diagonals);
    b_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = box.s_lo + (static_cast<double>(j) + 0.5) * ds;
      b_[j] = std::sqrt(ds) * amp.s_factor(s) * std::polar(1.0, lambda * phase.s_part(s));
    }
    // Row factors e^{i lambda (slope(t) s_0 + t_part(t))} cancel in M* M; s_part is a diagonal unitary.
    work_.resize(n);
  }

  void operator()(const complex* x, complex* out) {
    for (std::size_t k = 0; k < n_; ++k) work_[k] = b_[k] * x[k];
    toeplitz_->apply(work_.data(), out);
    for (std::size_t j = 0; j < n_; ++j) out[j] *= std::conj(b_[j]);
  }

 private:
  std::size_t n_;
  std::optional<numeric::ToeplitzMultiplier> toeplitz_;
  std::vector<complex> b_, work_;
};

}  // namespace detail

/// Largest singular value of M_ij = sqrt(dt ds) e^{i lambda phi(t_i, s_j)} a(t_i, s_j)
/// on n x n midpoint grids of the amplitude support, by Lanczos on M* M.
inline NormEstimate estimate_operator_norm(const Phase& phase, const Amplitude& amp, double lambda,
                                           std::size_t n_nodes = 0, const NormOptions& opt = {}) {
  if (!(lambda > 0.0)) throw std::invalid_argument("operator_norm: lambda must be positive");
  const std::size_t rule = required_nodes(phase, amp, lambda);
  if (n_nodes == 0) n_nodes = std::max<std::size_t>(256, rule);
  if (n_nodes < rule) throw ResolutionError("operator_norm: grid under-resolves the phase", rule);
  const std::size_t n = n_nodes;
  NormEstimate est;
  est.n_nodes = n;
  const Rect& box = amp.support;
  const double dt = box.t_length() / static_cast<double>(n), ds = box.s_length() / static_cast<double>(n);
  const double w = std::sqrt(dt * ds);
  const auto t_node = [&](std::size_t i) { return box.t_lo + (static_cast<double>(i) + 0.5) * dt; };
  const auto s_node = [&](std::size_t j) { return box.s_lo + (static_cast<double>(j) + 0.5) * ds; };

  numeric::LanczosResult res;
  if (phase.affine_in_s() && amp.separable()) {
    est.path = NormPath::Toeplitz;
    detail::ToeplitzGram gram(phase, amp, lambda, n);
    res = numeric::largest_eigenvalue(n, gram, opt.lanczos);
  } else if (n * n <= opt.dense_limit) {
    est.path = NormPath::Dense;
    std::vector<complex> M(n * n);
    numeric::parallel_for(n, [&](std::size_t i) {
      const double t = t_node(i);
      for (std::size_t j = 0; j < n; ++j) {
        const double s = s_node(j);
        const double a = amp(t, s);
        M[i * n + j] = a == 0.0 ? complex{} : w * a * std::polar(1.0, lambda * phase(t, s));
      }
    });
    std::vector<complex> y(n);
    const auto gram = [&](const complex* x, complex* out) {
      numeric::parallel_for(n, [&](std::size_t i) {
        complex acc = 0.0;
        const complex* row = &M[i * n];
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
        y[i] = acc;
      });
      numeric::parallel_for(n, [&](std::size_t j) {
        complex acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += std::conj(M[i * n + j]) * y[i];
        out[j] = acc;
      });
    };
    res = numeric::largest_eigenvalue(n, gram, opt.lanczos);
  } else {
    est.path = NormPath::MatrixFree;
    const auto entry = [&](std::size_t i, std::size_t j) {
      const double t = t_node(i), s = s_node(j);
      const double a = amp(t, s);
      return a == 0.0 ? complex{} : w * a * std::polar(1.0, lambda * phase(t, s));
    };
    std::vector<complex> y(n);
    const auto gram = [&](const complex* x, complex* out) {
      numeric::parallel_for(n, [&](std::size_t i) {
        complex acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += entry(i, j) * x[j];
        y[i] = acc;
      });
      numeric::parallel_for(n, [&](std::size_t j) {
        complex acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += std::conj(entry(i, j)) * y[i];
        out[j] = acc;
      });
    };
    res = numeric::largest_eigenvalue(n, gram, opt.lanczos);
  }
  est.value = std::sqrt(std::max(0.0, res.value));
  est.iterations = res.iterations;
  return est;
}

inline double operator_norm(const Phase& phase, const Amplitude& amp, double lambda, std::size_t n_nodes = 0,
                            const NormOptions& opt = {}) {
  return estimate_operator_norm(phase, amp, lambda, n_nodes, opt).value;
}

struct DecayFitResult {
  std::vector<double> lambda_grid;
  std::vector<double> norms;
  double sigma = 0.0;  ///< fitted exponent: norm ~ lambda^{-sigma}
  double r_squared = 0.0;
};

/// Least-squares fit of ln(norm) against ln(lambda).
inline DecayFitResult fit_decay(const std::vector<double>& lambdas, const std::vector<double>& norms) {
  DecayFitResult out{lambdas, norms, 0.0, 0.0};
  const std::size_t n = lambdas.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) mx += std::log(lambdas[k]), my += std::log(norms[k]);
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = std::log(lambdas[k]) - mx, dy = std::log(norms[k]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  out.sigma = -slope;
  const double residual = std::max(0.0, syy - slope * sxy);
  out.r_squared = syy > 0.0 ? std::clamp(1.0 - residual / syy, 0.0, 1.0) : 1.0;
  return out;
}

inline DecayFitResult decay_fit(const Phase& phase, const Amplitude& amp, const std::vector<double>& lambda_grid,
                                const NormOptions& opt = {}) {
  if (lambda_grid.size() < 5) throw std::invalid_argument("decay_fit: need at least 5 lambda values");
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] > 0.0)) throw std::invalid_argument("decay_fit: lambda values must be positive");
    if (k > 0 && lambda_grid[k] != 2.0 * lambda_grid[k - 1]) throw std::invalid_argument("decay_fit: grid must be dyadic");
  }
  std::vector<double> norms;
  for (double lambda : lambda_grid) norms.push_back(operator_norm(phase, amp, lambda, 0, opt));
  return fit_decay(lambda_grid, norms);
}

/// Curves on which phi_st vanishes, for the fold variants of the constants.
struct FoldCurves {
  std::function<double(double)> t_c;  ///< t_c(s)
  std::function<double(double)> s_c;  ///< s_c(t)
};

inline FoldCurves fold_curves(const phase::ZeroSetGeometry& z) {
  const phase::CriticalCurves curves(z);
  return {[curves](double s) { return curves.t_c(s); }, [curves](double t) { return curves.s_c(t); }};
}

/// The bracketed quantities of the oscillatory bounds, universal constant set to 1:
/// C = diam^{1/2} {|a| + S / inf|phi_st|^2}, C' = diam^{1/4} {|a| + S / inf|phi_st/(t - t_c)|^2},
/// C'' likewise with (s - s_c) and the s-derivative sums.
struct OscillatoryConstants {
  double C = std::numeric_limits<double>::infinity();
  double C_left_fold = std::numeric_limits<double>::infinity();
  double C_right_fold = std::numeric_limits<double>::infinity();
  double diameter = 0.0;
  double sum_t = 0.0, sum_s = 0.0;  ///< sum_{i,j<=2} |d^i a| |d^j phi_st| in t and in s
  double inf_mixed = 0.0;
};

inline OscillatoryConstants oscillatory_constants(const Phase& phase, const Amplitude& amp,
                                                  const std::optional<FoldCurves>& folds = std::nullopt,
                                                  std::size_t grid_n = 129) {
  OscillatoryConstants out;
  const Rect& box = amp.support;
  out.diameter = box.diameter();
  const double ht = 1e-3 * box.t_length(), hs = 1e-3 * box.s_length();
  std::array<double, 3> dphi_t{}, dphi_s{};
  double inf_mixed = std::numeric_limits<double>::infinity(), sup_mixed = 0.0;
  double inf_left = std::numeric_limits<double>::infinity(), inf_right = inf_left;
  for (std::size_t i = 0; i < grid_n; ++i) {
    const double t = box.t_lo + box.t_length() * static_cast<double>(i) / static_cast<double>(grid_n - 1);
    for (std::size_t j = 0; j < grid_n; ++j) {
      const double s = box.s_lo + box.s_length() * static_cast<double>(j) / static_cast<double>(grid_n - 1);
      const auto mt = [&](double x) { return phase.mixed_derivative(x, s); };
      const auto ms = [&](double x) { return phase.mixed_derivative(t, x); };
      const double m = std::fabs(phase.mixed_derivative(t, s));
      const double mt1 = std::fabs(numeric::central4<double>(mt, t, ht));
      const double ms1 = std::fabs(numeric::central4<double>(ms, s, hs));
      dphi_t = {std::max(dphi_t[0], m), std::max(dphi_t[1], mt1),
                std::max(dphi_t[2], std::fabs(numeric::second_central4<double>(mt, t, ht)))};
      dphi_s = {std::max(dphi_s[0], m), std::max(dphi_s[1], ms1),
                std::max(dphi_s[2], std::fabs(numeric::second_central4<double>(ms, s, hs)))};
      inf_mixed = std::min(inf_mixed, m);
      sup_mixed = std::max(sup_mixed, m);
      if (folds && folds->t_c) {
        const double gap = std::fabs(t - folds->t_c(s));
        inf_left = std::min(inf_left, gap > 1e-9 ? m / gap : mt1);
      }
      if (folds && folds->s_c) {
        const double gap = std::fabs(s - folds->s_c(t));
        inf_right = std::min(inf_right, gap > 1e-9 ? m / gap : ms1);
      }
    }
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out.sum_t += amp.dt_sup[i] * dphi_t[j];
      out.sum_s += amp.ds_sup[i] * dphi_s[j];
    }
  out.inf_mixed = inf_mixed;
  const double a_sup = amp.dt_sup[0];
  // A sign change or an exact zero of phi_st on the support leaves the infimum at zero.
  if (inf_mixed > 1e-9 * sup_mixed) out.C = std::sqrt(out.diameter) * (a_sup + out.sum_t / (inf_mixed * inf_mixed));
  if (folds && folds->t_c && inf_left > 0.0)
    out.C_left_fold = std::pow(out.diameter, 0.25) * (a_sup + out.sum_t / (inf_left * inf_left));
  if (folds && folds->s_c && inf_right > 0.0)
    out.C_right_fold = std::pow(out.diameter, 0.25) * (a_sup + out.sum_s / (inf_right * inf_right));
  return out;
}

/// Radial amplitude a(r) = lambda / (T (1 + r)) w(r), with w a smooth window
/// rising from 0 at r = 1/2 to 1 at r = 1. Obeys |d^j a / dr^j| <= C_j lambda T^{-1} r^{-1-j}.
struct ModelAmplitude {
  double T = 1.0;
  double lambda = 1.0;

  static double window(double r) {
    const double x = 2.0 * r - 1.0;
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
  }

  double operator()(double r) const { return lambda / (T * (1.0 + r)) * window(r); }

  /// j-th derivative, j <= 3, by central differences in long double.
  double derivative(int j, double r) const {
    if (j == 0) return (*this)(r);
    const long double h = 1e-3L;
    const auto f = [this](long double x) { return static_cast<long double>((*this)(static_cast<double>(x))); };
    const long double x = r;
    switch (j) {
      case 1: return static_cast<double>((f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h));
      case 2:
        return static_cast<double>((-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) /
                                   (12 * h * h));
      case 3:
        return static_cast<double>((-f(x - 2 * h) + 2 * f(x - h) - 2 * f(x + h) + f(x + 2 * h)) / (2 * h * h * h));
      default: throw std::invalid_argument("ModelAmplitude::derivative: j must lie in [0, 3]");
    }
  }

  /// Sampled C_j = sup_r |a^{(j)}(r)| T r^{1+j} / lambda over (0, r_max], j = 0..3.
  std::array<double, 4> constants(double r_max = 64.0, std::size_t samples = 4096) const {
    std::array<double, 4> c{};
    for (std::size_t k = 1; k <= samples; ++k) {
      const double r = 0.5 + (r_max - 0.5) * std::pow(static_cast<double>(k) / static_cast<double>(samples), 2.0);
      for (int j = 0; j < 4; ++j)
        c[j] = std::max(c[j], std::fabs(derivative(j, r)) * T * std::pow(r, 1.0 + j) / lambda);
    }
    return c;
  }

  /// The amplitude composed with a phase: (t, s) -> a(phi(t, s)).
  Amplitude on(const Phase& phase, const Rect& box) const {
    const ModelAmplitude self = *this;
    Amplitude amp;
    amp.value = [self, phase](double t, double s) { return self(phase(t, s)); };
    amp.support = box;
    const auto sup = detail::sample_sup_norms(amp.value, box, 65);
    for (int i = 0; i < 3; ++i) amp.dt_sup[i] = 1.05 * sup[0][i], amp.ds_sup[i] = 1.05 * sup[1][i];
    return amp;
  }
};

}  // namespace hyperfold::osc
