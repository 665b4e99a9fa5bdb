// hwsnkey: run connectivity and node-capture experiments from JSON configs
// or built-in presets.
//
// Output directory precedence: --output, then $HWSNKEY_OUTPUT_DIR, then the
// config's output_dir.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hwsnkey/error.hpp"
#include "hwsnkey/experiment.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> output;
};

void apply_overrides(hwsnkey::ExperimentConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (const char* env = std::getenv("HWSNKEY_OUTPUT_DIR"); env && *env) {
    cfg.output_dir = std::string(env) + "/" + cfg.name;
  }
  if (o.output) cfg.output_dir = *o.output;
  cfg.validate();
}

int execute(hwsnkey::ExperimentConfig cfg, const Overrides& o) {
  apply_overrides(cfg, o);
  const auto result = hwsnkey::run_experiment(cfg);
  std::cout << "wrote " << result.csv_path.string() << " (" << result.rows.size() << " rows, "
            << result.plot_paths.size() << " plot files) in " << result.wall_seconds << " s\n";
  return 0;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Experiment seed");
  cmd->add_option("--trials", o.trials, "Deployment trials per sweep point")
      ->check(CLI::PositiveNumber);
  cmd->add_option("-o,--output", o.output, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-based key pre-distribution simulator for heterogeneous sensor networks"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string config_path;
  std::string preset;
  bool full_scale = false;

  auto* run = app.add_subcommand("run", "Run an experiment from a config or manifest file");
  run->add_option("config", config_path, "Config JSON or manifest.json")->required();
  add_overrides(run, overrides);

  auto* pre = app.add_subcommand("preset", "Run a built-in preset experiment");
  pre->add_option("name", preset, "Preset name")
      ->required()
      ->check(CLI::IsMember(hwsnkey::preset_names()));
  pre->add_flag("--full-scale", full_scale, "Use 100 groups on a 1000 m field");
  add_overrides(pre, overrides);

  auto* val = app.add_subcommand("validate", "Check a config file without running it");
  val->add_option("config", config_path, "Config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return execute(hwsnkey::load_experiment_config(config_path), overrides);
    if (*pre) return execute(hwsnkey::preset_config(preset, full_scale), overrides);
    if (*val) {
      const auto cfg = hwsnkey::load_experiment_config(config_path);
      std::cout << "ok: " << cfg.name << " (" << hwsnkey::to_string(cfg.kind) << ", "
                << cfg.sweep.values.size() << " sweep points, " << cfg.trials << " trials)\n";
      return 0;
    }
  } catch (const hwsnkey::ConfigError& e) {
    std::cerr << "hwsnkey: invalid config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hwsnkey: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
