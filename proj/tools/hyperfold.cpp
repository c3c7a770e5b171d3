#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hyperfold/harness/config.hpp"
#include "hyperfold/harness/run.hpp"
#include "hyperfold/harness/scenarios.hpp"
#include "hyperfold/numeric/parallel.hpp"

namespace hh = hyperfold::harness;

int main(int argc, char** argv) {
  CLI::App app{"hyperfold: audits for the two-geodesic oscillatory kernel"};
  app.require_subcommand(1);
  std::string config_path, scenario, out_dir;
  unsigned threads = 1;

  const std::map<std::string, std::string> about{
      {"phase", "sample phi and phi_st on the box, describe the zero set"},
      {"bounds", "mixed-derivative lower bounds and derivative constants"},
      {"kernel", "K_alpha sweep over distance and frequency"},
      {"decay", "operator norms over the frequency grid and the decay fit"},
      {"bessel", "agreement of the two Bessel regimes"},
      {"composite", "partitioned operator norm against the region estimates"}};
  for (const auto& name : hh::subcommands()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    auto* cfg = sub->add_option("--config", config_path, "scenario config (JSON)");
    auto* sc = sub->add_option("--scenario", scenario, "built-in scenario name");
    cfg->excludes(sc);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
  }
  app.add_subcommand("list", "print the built-in scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hh::kInvalidConfig;
  }

  auto* chosen = app.get_subcommands().front();
  if (chosen->get_name() == "list") {
    for (const auto& s : hh::builtin_scenarios()) std::cout << s.config.name << "\n";
    return 0;
  }

  hh::ScenarioConfig config;
  if (!scenario.empty()) {
    const auto* builtin = hh::find_builtin(scenario);
    if (!builtin) {
      std::cerr << "error: unknown scenario " << scenario << "\n";
      return hh::kInvalidConfig;
    }
    config = builtin->config;
  } else if (!config_path.empty()) {
    const auto v = hh::load_config(config_path);
    for (const auto& w : v.warnings) std::cerr << "warning: " << w << "\n";
    if (!v.ok()) {
      for (const auto& e : v.errors) std::cerr << "error: " << e << "\n";
      return hh::kInvalidConfig;
    }
    config = *v.config;
  } else {
    std::cerr << "error: one of --config or --scenario is required\n";
    return hh::kInvalidConfig;
  }
  if (out_dir.empty()) out_dir = config.output_dir.empty() ? "out" : config.output_dir;

  hyperfold::numeric::set_default_threads(threads);
  return hh::run_subcommand(chosen->get_name(), config, out_dir, std::cout).exit_code;
}
