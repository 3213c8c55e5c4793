#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hetcomp_cli/cli.hpp"

int main(int argc, char** argv) {
  using namespace hetcomp::cli;

  CLI::App app{"Monte Carlo evaluation of delayed-overhead CoMP in multi-tier networks"};
  RunManifest manifest;
  std::string experiment;
  std::string config;
  std::string out = ".";
  app.add_option("--config", config, "experiment config (JSON)")->required();
  app.add_option("--experiment", experiment,
                 "DelaySweep | LSweep | IntraTierLoss | BoundsValidation | TimeFractionReport")
      ->required();
  app.add_option("--seed", manifest.seed, "base seed")->capture_default_str();
  app.add_option("--trials", manifest.trials, "Monte Carlo trials per point")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_flag("--force", manifest.force, "overwrite existing outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  const auto parsed = parse_experiment(experiment);
  if (!parsed) {
    std::cerr << "unknown experiment '" << experiment << "'\n";
    return kValidation;
  }
  manifest.experiment = *parsed;
  manifest.config_path = config;
  manifest.output_dir = out;

  const auto result = run(manifest);
  (result.exit_code == kOk ? std::cout : std::cerr) << result.message << '\n';
  return result.exit_code;
}
