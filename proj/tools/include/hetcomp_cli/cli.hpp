#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hetcomp::cli {

enum class Experiment { DelaySweep, LSweep, IntraTierLoss, BoundsValidation, TimeFractionReport };

std::optional<Experiment> parse_experiment(std::string_view name);
const char* experiment_name(Experiment experiment);

struct RunManifest {
  Experiment experiment = Experiment::DelaySweep;
  std::filesystem::path config_path;
  std::uint64_t seed = 0;
  std::size_t trials = 100'000;
  std::filesystem::path output_dir = ".";
  bool force = false;
};

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2 };

struct RunResult {
  int exit_code = kOk;
  std::string message;
  std::vector<std::filesystem::path> files;
};

/// Loads and validates the config, runs the experiment and writes its CSVs
/// plus manifest.json into output_dir. Nothing is written when any target
/// file already exists and force is off.
RunResult run(const RunManifest& manifest);

/// File names `run` emits for an experiment, manifest.json last.
std::vector<std::string> output_files(Experiment experiment);

}  // namespace hetcomp::cli
