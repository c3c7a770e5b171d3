#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hyperfold/harness/config.hpp"
#include "hyperfold/harness/run.hpp"
#include "hyperfold/harness/scenarios.hpp"
#include "hyperfold/numeric/parallel.hpp"

namespace hh = hyperfold::harness;
namespace fs = std::filesystem;

namespace {

hh::json minimal() {
  return hh::json::parse(R"({"geometry": {"a": 0.2, "r": 0.11, "beta": 1.0471975511965976,
                             "s_interval_offset": 1.0}, "T": 10, "epsilon": 0.05,
                             "lambda_grid": [64, 128, 256, 512, 1024], "grid_n": 24})");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "hyperfold_harness_test" / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Config, AcceptsMinimalConfig) {
  const auto v = hh::validate_config(minimal());
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v.config->grid_n, 24);
  EXPECT_TRUE(v.warnings.empty());
}

TEST(Config, BetaOutOfRange) {
  auto raw = minimal();
  raw["geometry"]["beta"] = 2.0;
  const auto v = hh::validate_config(raw);
  ASSERT_FALSE(v.ok());
  EXPECT_FALSE(v.config);
  EXPECT_EQ(v.errors.front(), "beta out of (0, \xcf\x80/2]");
}

TEST(Config, MissingLambdaGridDefaultsWithWarning) {
  auto raw = minimal();
  raw.erase("lambda_grid");
  const auto v = hh::validate_config(raw);
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v.config->lambda_grid, hh::default_lambda_grid());
  EXPECT_EQ(v.config->lambda_grid.front(), 64.0);
  EXPECT_EQ(v.config->lambda_grid.back(), 4096.0);
  EXPECT_EQ(v.warnings.size(), 1u);
}

TEST(Config, ListsEveryViolation) {
  auto raw = minimal();
  raw["geometry"]["r"] = -1.0;
  raw["epsilon"] = 0.5;
  raw["lambda_grid"] = {128, 64};
  raw["colour"] = "blue";
  raw.erase("T");
  const auto v = hh::validate_config(raw);
  EXPECT_EQ(v.errors.size(), 5u);
  EXPECT_FALSE(v.config);
  EXPECT_FALSE(hh::validate_config_text("{not json").ok());
}

TEST(Config, RoundTripsThroughJson) {
  for (const auto& s : hh::builtin_scenarios()) {
    const auto v = hh::validate_config(hh::to_json(s.config));
    ASSERT_TRUE(v.ok()) << s.config.name;
    EXPECT_EQ(hh::to_json(*v.config), hh::to_json(s.config));
  }
}

TEST(Harness, FloatsUseSeventeenDigits) {
  EXPECT_EQ(hh::fmt(0.1), "0.10000000000000001");
  EXPECT_EQ(hh::fmt(std::nan("")), "nan");
}

TEST(Harness, UnknownSubcommandIsAConfigError) {
  std::ostringstream log;
  EXPECT_EQ(hh::run_subcommand("plot", *hh::validate_config(minimal()).config, scratch("unknown"), log).exit_code,
            hh::kInvalidConfig);
}

TEST(Harness, PhaseOnEmptyZeroSet) {
  auto cfg = hh::find_builtin("no-zero-set")->config;
  cfg.grid_n = 16;
  std::ostringstream log;
  const auto dir = scratch("empty");
  const auto res = hh::run_subcommand("phase", cfg, dir, log);
  EXPECT_EQ(res.exit_code, 0);
  const auto j = hh::json::parse(slurp(dir / "zero_geometry.json"));
  EXPECT_EQ(j["empty"], true);
  const auto csv = slurp(dir / "phase_surface.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,s,phi,phi_st,region");
}

TEST(Harness, DeterministicAcrossRunsAndThreads) {
  const auto cfg = *hh::validate_config(minimal()).config;
  for (const std::string sub : {"phase", "bounds", "kernel", "composite"}) {
    std::ostringstream log;
    hyperfold::numeric::set_default_threads(1);
    const auto a = scratch("det_a"), b = scratch("det_b");
    const auto ra = hh::run_subcommand(sub, cfg, a, log);
    hyperfold::numeric::set_default_threads(3);
    const auto rb = hh::run_subcommand(sub, cfg, b, log);
    hyperfold::numeric::set_default_threads(1);
    EXPECT_EQ(ra.exit_code, rb.exit_code) << sub;
    ASSERT_EQ(ra.files, rb.files);
    for (const auto& f : ra.files) EXPECT_EQ(slurp(a / f), slurp(b / f)) << sub << " " << f;
  }
}

TEST(Harness, FoldDecayScenario) {
  auto cfg = hh::find_builtin("fold-model")->config;
  std::ostringstream log;
  const auto dir = scratch("fold");
  const auto res = hh::run_subcommand("decay", cfg, dir, log);
  EXPECT_EQ(res.exit_code, 0) << log.str();
  const auto fit = hh::json::parse(slurp(dir / "fit.json"));
  EXPECT_GE(fit["sigma"].get<double>(), 0.20);
  EXPECT_LE(fit["sigma"].get<double>(), 0.30);
  EXPECT_EQ(slurp(dir / "decay.csv").substr(0, 14), "lambda,opnorm\n");
}

TEST(Harness, DecayRejectsNonDyadicGrid) {
  auto cfg = *hh::validate_config(minimal()).config;
  cfg.decay_phase = "nondegenerate";
  cfg.lambda_grid = {64, 100, 256, 512, 1024};
  std::ostringstream log;
  EXPECT_EQ(hh::run_subcommand("decay", cfg, scratch("nondyadic"), log).exit_code, hh::kInvalidConfig);
}

TEST(Harness, InadmissibleGeometryIsAnAuditFailure) {
  auto cfg = *hh::validate_config(minimal()).config;
  cfg.geometry = {0.3, 1.0, 1.0, 0.0};
  std::ostringstream log;
  EXPECT_EQ(hh::run_subcommand("bounds", cfg, scratch("inadmissible"), log).exit_code, hh::kAuditFailure);
}
