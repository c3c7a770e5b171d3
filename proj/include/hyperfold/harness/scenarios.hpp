#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hyperfold/harness/config.hpp"

namespace hyperfold::harness {

/// A shipped scenario with the exit status each subcommand is pinned to.
struct BuiltinScenario {
  ScenarioConfig config;
  std::map<std::string, int> expected_exit;
};

namespace detail {

inline std::vector<double> dyadic(int lo, int hi) {
  std::vector<double> grid;
  for (int k = lo; k <= hi; ++k) grid.push_back(std::ldexp(1.0, k));
  return grid;
}

inline ScenarioConfig base(std::string name, double a, double r, double beta, double offset) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.geometry = {a, r, beta, offset};
  c.tube_R = 1.0;
  c.T = 10.0;
  c.epsilon = 0.05;
  c.lambda_grid = dyadic(6, 11);
  c.grid_n = 128;
  c.fd_step = 1e-4;
  c.seed = 0x5eed;
  c.output_dir = "out/" + c.name;
  return c;
}

}  // namespace detail

inline const std::vector<BuiltinScenario>& builtin_scenarios() {
  // The kernel sweep runs r up to T, where the cutoff chi-hat(r/T) vanishes; its
  // constant-stability audit is expected to fail.
  static const std::vector<BuiltinScenario> all = [] {
    constexpr double right = std::numbers::pi / 2, third = std::numbers::pi / 3;
    const std::map<std::string, int> exits{{"phase", 0}, {"bounds", 0}, {"kernel", 2},
                                           {"decay", 0}, {"bessel", 0}, {"composite", 0}};
    std::vector<BuiltinScenario> v;

    auto nondeg = detail::base("nondegenerate", 0.2, 0.186, third, 1.5);
    nondeg.decay_phase = "nondegenerate";
    nondeg.lambda_grid = detail::dyadic(6, 14);
    v.push_back({nondeg, exits});

    auto fold = detail::base("fold-model", 2.169, 0.5, right, -0.5);
    fold.decay_phase = "fold";
    fold.lambda_grid = detail::dyadic(6, 14);
    v.push_back({fold, exits});

    v.push_back({detail::base("beta-right-angle", 2.169, 0.5, right, -0.5), exits});
    v.push_back({detail::base("generic-tilt", 0.2, 0.11, third, 1.0), exits});
    v.push_back({detail::base("no-zero-set", 2.0, 0.3, third, -0.5), exits});
    return v;
  }();
  return all;
}

inline const BuiltinScenario* find_builtin(const std::string& name) {
  for (const auto& s : builtin_scenarios())
    if (s.config.name == name) return &s;
  return nullptr;
}

}  // namespace hyperfold::harness
