#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hyperfold::harness {

using json = nlohmann::json;

struct Geometry {
  double a = 0.0;
  double r = 1.0;
  double beta = std::numbers::pi / 2;
  double s_interval_offset = 0.0;
};

/// Decay phases: the hyperbolic distance phase of the geometry, or one of the
/// model phases on [0,1]^2.
inline const std::vector<std::string>& decay_phases() {
  static const std::vector<std::string> names{"hyperbolic", "nondegenerate", "fold", "separable"};
  return names;
}

struct ScenarioConfig {
  std::string name;
  Geometry geometry;
  double tube_R = 1.0;
  double T = 10.0;
  double epsilon = 0.05;
  std::vector<double> lambda_grid;
  int grid_n = 128;
  double fd_step = 1e-4;
  std::uint64_t seed = 0x5eed;
  std::string output_dir;
  std::string decay_phase = "hyperbolic";
  double composite_lambda_max = 1024.0;
  double log_coefficient = 0.0;  ///< c in T = c ln lambda; 0 picks 1 / (24 C)
};

inline std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int k = 6; k <= 12; ++k) grid.push_back(std::ldexp(1.0, k));
  return grid;
}

struct Validation {
  std::optional<ScenarioConfig> config;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

namespace detail {

class FieldReader {
 public:
  FieldReader(const json& obj, std::string prefix, std::vector<std::string>& errors)
      : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {}

  std::optional<double> number(const std::string& key, bool required) {
    const std::string name = prefix_ + key;
    if (!obj_.contains(key)) {
      if (required) errors_.push_back("missing " + name);
      return std::nullopt;
    }
    const auto& v = obj_.at(key);
    if (!v.is_number()) {
      errors_.push_back(name + " must be a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      errors_.push_back(name + " must be finite");
      return std::nullopt;
    }
    return x;
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& errors_;
};

}  // namespace detail

/// Full validation: every violation is listed, and no config is returned unless all pass.
inline Validation validate_config(const json& raw) {
  Validation out;
  auto& errors = out.errors;
  if (!raw.is_object()) {
    errors.push_back("config must be an object");
    return out;
  }
  static const std::set<std::string> known{"name",    "geometry",     "tube_R", "T",
                                           "epsilon", "lambda_grid",  "grid_n", "fd_step",
                                           "seed",    "output_dir",   "decay_phase",
                                           "composite_lambda_max",     "log_coefficient"};
  for (const auto& [key, _] : raw.items())
    if (!known.count(key)) errors.push_back("unknown key " + key);

  ScenarioConfig cfg;
  if (raw.contains("name")) {
    if (raw["name"].is_string()) cfg.name = raw["name"].get<std::string>();
    else errors.push_back("name must be a string");
  }

  if (!raw.contains("geometry")) {
    errors.push_back("missing geometry");
  } else if (!raw["geometry"].is_object()) {
    errors.push_back("geometry must be an object");
  } else {
    const auto& g = raw["geometry"];
    static const std::set<std::string> gkeys{"a", "r", "beta", "s_interval_offset"};
    for (const auto& [key, _] : g.items())
      if (!gkeys.count(key)) errors.push_back("unknown key geometry." + key);
    detail::FieldReader geo(g, "geometry.", errors);
    if (auto a = geo.number("a", true)) {
      if (*a < 0.0) errors.push_back("a must be >= 0");
      cfg.geometry.a = *a;
    }
    if (auto r = geo.number("r", true)) {
      if (!(*r > 0.0)) errors.push_back("r must be > 0");
      cfg.geometry.r = *r;
    }
    if (auto beta = geo.number("beta", true)) {
      if (!(*beta > 0.0 && *beta <= std::numbers::pi / 2)) errors.push_back("beta out of (0, \xcf\x80/2]");
      cfg.geometry.beta = *beta;
    }
    if (auto off = geo.number("s_interval_offset", false)) cfg.geometry.s_interval_offset = *off;
  }

  detail::FieldReader top(raw, "", errors);
  if (auto R = top.number("tube_R", false)) {
    if (!(*R > 0.0)) errors.push_back("tube_R must be > 0");
    cfg.tube_R = *R;
  }
  if (auto T = top.number("T", true)) {
    if (!(*T > 0.0)) errors.push_back("T must be > 0");
    cfg.T = *T;
  }
  if (auto eps = top.number("epsilon", true)) {
    if (!(*eps > 0.0 && *eps < 0.25)) errors.push_back("epsilon out of (0, 1/4)");
    cfg.epsilon = *eps;
  }

  if (!raw.contains("lambda_grid")) {
    cfg.lambda_grid = default_lambda_grid();
    out.warnings.push_back("lambda_grid missing; using 2^6 .. 2^12");
  } else if (!raw["lambda_grid"].is_array() || raw["lambda_grid"].empty()) {
    errors.push_back("lambda_grid must be a non-empty array");
  } else {
    bool good = true;
    for (const auto& v : raw["lambda_grid"]) {
      if (!v.is_number() || !std::isfinite(v.get<double>()) || !(v.get<double>() > 0.0)) {
        good = false;
        break;
      }
      cfg.lambda_grid.push_back(v.get<double>());
    }
    if (!good) errors.push_back("lambda_grid entries must be finite positive numbers");
    else
      for (std::size_t k = 1; k < cfg.lambda_grid.size(); ++k)
        if (!(cfg.lambda_grid[k] > cfg.lambda_grid[k - 1])) {
          errors.push_back("lambda_grid must be strictly increasing");
          break;
        }
  }

  if (raw.contains("grid_n")) {
    const auto& v = raw["grid_n"];
    if (!v.is_number_integer() || v.get<long long>() < 8 || v.get<long long>() > 8192)
      errors.push_back("grid_n must be an integer in [8, 8192]");
    else cfg.grid_n = v.get<int>();
  }
  if (auto h = top.number("fd_step", false)) {
    if (!(*h > 0.0 && *h < 0.1)) errors.push_back("fd_step out of (0, 0.1)");
    cfg.fd_step = *h;
  }
  if (raw.contains("seed")) {
    const auto& v = raw["seed"];
    if (!v.is_number_unsigned()) errors.push_back("seed must be a non-negative integer");
    else cfg.seed = v.get<std::uint64_t>();
  }
  if (raw.contains("output_dir")) {
    if (raw["output_dir"].is_string()) cfg.output_dir = raw["output_dir"].get<std::string>();
    else errors.push_back("output_dir must be a string");
  }
  if (raw.contains("decay_phase")) {
    const auto& v = raw["decay_phase"];
    const auto& names = decay_phases();
    if (!v.is_string() || std::find(names.begin(), names.end(), v.get<std::string>()) == names.end())
      errors.push_back("decay_phase must be one of hyperbolic, nondegenerate, fold, separable");
    else cfg.decay_phase = v.get<std::string>();
  }
  if (auto m = top.number("composite_lambda_max", false)) {
    if (!(*m > 0.0)) errors.push_back("composite_lambda_max must be > 0");
    cfg.composite_lambda_max = *m;
  }
  if (auto c = top.number("log_coefficient", false)) {
    if (*c < 0.0) errors.push_back("log_coefficient must be >= 0");
    cfg.log_coefficient = *c;
  }

  if (errors.empty()) out.config = cfg;
  return out;
}

inline Validation validate_config_text(std::string_view text) {
  json raw;
  try {
    raw = json::parse(text);
  } catch (const json::parse_error& e) {
    Validation out;
    out.errors.push_back(std::string("parse error: ") + e.what());
    return out;
  }
  return validate_config(raw);
}

inline Validation load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Validation out;
    out.errors.push_back("cannot read " + path);
    return out;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return validate_config_text(buf.str());
}

inline json to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["geometry"] = {{"a", c.geometry.a},
                   {"r", c.geometry.r},
                   {"beta", c.geometry.beta},
                   {"s_interval_offset", c.geometry.s_interval_offset}};
  j["tube_R"] = c.tube_R;
  j["T"] = c.T;
  j["epsilon"] = c.epsilon;
  j["lambda_grid"] = c.lambda_grid;
  j["grid_n"] = c.grid_n;
  j["fd_step"] = c.fd_step;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["decay_phase"] = c.decay_phase;
  j["composite_lambda_max"] = c.composite_lambda_max;
  j["log_coefficient"] = c.log_coefficient;
  return j;
}

}  // namespace hyperfold::harness
