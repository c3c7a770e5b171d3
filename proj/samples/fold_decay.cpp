// Evaluates the phase on one geometry, then estimates decay exponents for the model phases.

#include <cstdio>
#include <numbers>

#include "hyperfold/oscillatory.hpp"
#include "hyperfold/phase.hpp"

namespace ph = hyperfold::phase;
namespace osc = hyperfold::osc;

int main() {
  const auto p = ph::PhaseParams::make(0.2, 0.11, std::numbers::pi / 3, 1.0);
  for (double t : {0.0, 0.5, 1.0})
    std::printf("t = %.1f  s = 1.5  phi = %.12f  phi_st = %.6e\n", t, ph::phi(t, 1.5, p), ph::phi_st(t, 1.5, p));

  const auto z = ph::zero_geometry(p);
  if (!z.empty) std::printf("vertices (%.6f, %.6f) and (%.6f, %.6f)\n", z.t_minus, z.s_minus, z.t_plus, z.s_plus);

  const std::vector<double> grid{64, 128, 256, 512, 1024, 2048};
  const auto amp = osc::bump_amplitude();
  std::printf("sigma(ts)       = %.3f\n", osc::decay_fit(osc::nondegenerate_phase(), amp, grid).sigma);
  std::printf("sigma(fold)     = %.3f\n", osc::decay_fit(osc::fold_phase(), amp, grid).sigma);
  std::printf("sigma(t + s)    = %.3f\n", osc::decay_fit(osc::separable_phase(), amp, grid).sigma);
}
