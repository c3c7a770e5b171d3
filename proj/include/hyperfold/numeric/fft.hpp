#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace hyperfold::numeric {

namespace detail {
// FFTW's planner is not reentrant.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Products with a fixed n x n Toeplitz matrix, t_{jk} = d[j - k], through a
/// circulant embedding of length N >= 2n.
class ToeplitzMultiplier {
 public:
  /// diagonals[m] for m = -(n-1)..(n-1) stored at index m + n - 1.
  ToeplitzMultiplier(std::size_t n, const std::vector<std::complex<double>>& diagonals) : n_(n) {
    if (diagonals.size() != 2 * n - 1) throw std::invalid_argument("ToeplitzMultiplier: need 2n - 1 diagonals");
    N_ = 1;
    while (N_ < 2 * n) N_ <<= 1;
    buffer_ = fftw_alloc_complex(N_);
    symbol_.assign(N_, {});
    {
      std::lock_guard lock(detail::fftw_planner_mutex());
      forward_ = fftw_plan_dft_1d(static_cast<int>(N_), buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_1d(static_cast<int>(N_), buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    auto* data = reinterpret_cast<std::complex<double>*>(buffer_);
    for (std::size_t k = 0; k < N_; ++k) data[k] = 0.0;
    for (std::size_t m = 0; m < n; ++m) data[m] = diagonals[m + n - 1];
    for (std::size_t m = 1; m < n; ++m) data[N_ - m] = diagonals[n - 1 - m];
    fftw_execute(forward_);
    for (std::size_t k = 0; k < N_; ++k) symbol_[k] = data[k] / static_cast<double>(N_);
  }

  ToeplitzMultiplier(const ToeplitzMultiplier&) = delete;
  ToeplitzMultiplier& operator=(const ToeplitzMultiplier&) = delete;

  ~ToeplitzMultiplier() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
  }

  std::size_t size() const { return n_; }

  /// out = T x; not safe to call concurrently on one instance.
  void apply(const std::complex<double>* x, std::complex<double>* out) {
    auto* data = reinterpret_cast<std::complex<double>*>(buffer_);
    for (std::size_t k = 0; k < n_; ++k) data[k] = x[k];
    for (std::size_t k = n_; k < N_; ++k) data[k] = 0.0;
    fftw_execute(forward_);
    for (std::size_t k = 0; k < N_; ++k) data[k] *= symbol_[k];
    fftw_execute(backward_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = data[k];
  }

 private:
  std::size_t n_, N_ = 1;
  fftw_complex* buffer_ = nullptr;
  fftw_plan forward_{}, backward_{};
  std::vector<std::complex<double>> symbol_;
};

}  // namespace hyperfold::numeric
