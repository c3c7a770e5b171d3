#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperfold::numeric {

struct LanczosOptions {
  double tolerance = 1e-6;  ///< relative change of the top Ritz value between iterations
  int max_iterations = 500;
  std::uint64_t seed = 0x5eed;
};

struct LanczosResult {
  double value = 0.0;     ///< largest eigenvalue estimate
  double previous = 0.0;  ///< estimate one iteration earlier
  int iterations = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(double last, double previous)
      : std::runtime_error("Lanczos iteration did not converge: last iterates " + std::to_string(last) + ", " +
                           std::to_string(previous)),
        last_(last), previous_(previous) {}
  double last() const { return last_; }
  double previous() const { return previous_; }

 private:
  double last_, previous_;
};

namespace detail {

// Number of eigenvalues below x of the symmetric tridiagonal (alpha, beta).
inline int sturm_count(const std::vector<double>& alpha, const std::vector<double>& beta, double x) {
  int count = 0;
  double d = 1.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    const double b2 = k == 0 ? 0.0 : beta[k - 1] * beta[k - 1];
    d = alpha[k] - x - (k == 0 ? 0.0 : b2 / d);
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

inline double largest_tridiagonal_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta) {
  double lo = alpha[0], hi = alpha[0];
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    const double radius = (k > 0 ? std::fabs(beta[k - 1]) : 0.0) + (k + 1 < alpha.size() ? std::fabs(beta[k]) : 0.0);
    lo = std::min(lo, alpha[k] - radius);
    hi = std::max(hi, alpha[k] + radius);
  }
  const int n = static_cast<int>(alpha.size());
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(std::fabs(hi), std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(alpha, beta, mid) < n) lo = mid;
    else hi = mid;
  }
  return hi;
}

}  // namespace detail

/// Largest eigenvalue of a Hermitian positive semidefinite operator given by
/// apply(x, out), using Lanczos with full reorthogonalization from a seeded
/// pseudo-random start.
template <class Apply>
LanczosResult largest_eigenvalue(std::size_t n, Apply&& apply, const LanczosOptions& opt = {}) {
  using cplx = std::complex<double>;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<std::vector<cplx>> basis;
  std::vector<cplx> v(n), w(n);
  for (auto& x : v) {
    const double re = unif(rng);
    x = {re, unif(rng)};
  }
  const auto norm = [](const std::vector<cplx>& x) {
    double acc = 0.0;
    for (const auto& e : x) acc += std::norm(e);
    return std::sqrt(acc);
  };
  const double v_norm = norm(v);
  for (auto& x : v) x /= v_norm;

  std::vector<double> alpha, beta;
  LanczosResult res;
  int stable = 0;
  const int max_it = std::max(1, std::min<int>(opt.max_iterations, static_cast<int>(n)));
  for (int k = 0; k < max_it; ++k) {
    apply(v.data(), w.data());
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += (std::conj(v[i]) * w[i]).real();
    alpha.push_back(a);
    for (std::size_t i = 0; i < n; ++i) w[i] -= a * v[i];
    if (!basis.empty()) {
      const double b = beta.back();
      const auto& prev = basis.back();
      for (std::size_t i = 0; i < n; ++i) w[i] -= b * prev[i];
    }
    basis.push_back(v);
    for (const auto& q : basis) {
      cplx proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(q[i]) * w[i];
      for (std::size_t i = 0; i < n; ++i) w[i] -= proj * q[i];
    }
    const double b = norm(w);
    res.previous = res.value;
    res.value = detail::largest_tridiagonal_eigenvalue(alpha, beta);
    res.iterations = k + 1;
    if (!(b > 1e-13 * std::max(std::fabs(res.value), 1e-300)) || res.value == 0.0) return res;
    if (k > 0 && std::fabs(res.value - res.previous) <= opt.tolerance * std::fabs(res.value)) {
      if (++stable >= 2) return res;
    } else {
      stable = 0;
    }
    beta.push_back(b);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / b;
  }
  if (static_cast<std::size_t>(max_it) == n) return res;  // Krylov space exhausted
  throw ConvergenceError(res.value, res.previous);
}

}  // namespace hyperfold::numeric
