#include "hetcomp_cli/cli.hpp"

#include <array>
#include <functional>
#include <map>
#include <sstream>

#include <hetcomp/config_io.hpp>
#include <hetcomp/error.hpp>
#include <hetcomp/evaluate.hpp>
#include <hetcomp/version.hpp>
#include <json.hpp>

#include "csv.hpp"

namespace hetcomp::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::array<std::pair<Experiment, const char*>, 5> kNames{{
    {Experiment::DelaySweep, "DelaySweep"},
    {Experiment::LSweep, "LSweep"},
    {Experiment::IntraTierLoss, "IntraTierLoss"},
    {Experiment::BoundsValidation, "BoundsValidation"},
    {Experiment::TimeFractionReport, "TimeFractionReport"},
}};

using Outputs = std::map<std::string, std::string>;

double ms(double seconds) { return seconds * 1e3; }

std::string csv_name(const char* prefix, Metric metric) {
  return std::string(prefix) + "_" + metric_name(metric) + ".csv";
}

Outputs delay_sweep_csv(const ExperimentConfig& cfg, const RunManifest& m,
                        const std::string& digest) {
  const std::array<RateMapping, 2> maps{cfg.coverage, cfg.throughput};
  Outputs out;
  for (const auto& table : delay_sweep(cfg, maps, cfg.sweep.delay_means, m.trials, m.seed)) {
    CsvTable csv(digest, {"mean_delay_ms", "metric", "value", "std_error", "baseline_value",
                          "baseline_std_error", "trials", "seed"});
    for (const auto& r : table.rows) {
      csv.row()
          .add(ms(r.axis))
          .add(metric_name(table.metric))
          .add(r.comp.mean)
          .add(r.comp.std_error)
          .add(r.baseline->mean)
          .add(r.baseline->std_error)
          .add(std::uint64_t{r.comp.trials})
          .add(r.comp.seed);
    }
    out[csv_name("delay_sweep", table.metric)] = csv.str();
  }
  return out;
}

Outputs l_sweep_csv(const ExperimentConfig& cfg, const RunManifest& m, const std::string& digest) {
  const std::array<RateMapping, 2> maps{cfg.coverage, cfg.throughput};
  Outputs out;
  for (const auto& table : l_sweep(cfg, maps, cfg.sweep.l_values, m.trials, m.seed)) {
    CsvTable csv(digest, {"num_coordinated", "mean_delay_ms", "metric", "value", "std_error",
                          "trials", "seed"});
    for (const auto& r : table.rows) {
      csv.row()
          .add(r.axis)
          .add(ms(cfg.sweep.l_sweep_delay_mean))
          .add(metric_name(table.metric))
          .add(r.comp.mean)
          .add(r.comp.std_error)
          .add(std::uint64_t{r.comp.trials})
          .add(r.comp.seed);
    }
    out[csv_name("l_sweep", table.metric)] = csv.str();
  }
  return out;
}

Outputs intratier_loss_csv(const ExperimentConfig& cfg, const RunManifest& m,
                           const std::string& digest) {
  const std::array<RateMapping, 2> maps{cfg.coverage, cfg.throughput};
  std::vector<double> ls(cfg.sweep.l_values.begin(), cfg.sweep.l_values.end());
  std::erase(ls, 0.0);
  std::map<Metric, CsvTable> tables;
  for (const auto& mp : maps) {
    tables.emplace(metric_for(mp),
                   CsvTable(digest, {"axis", "axis_value", "metric", "cross_value",
                                     "cross_std_error", "intra_value", "intra_std_error", "loss",
                                     "loss_std_error", "trials", "seed"}));
  }
  auto emit = [&](LossAxis axis, std::span<const double> values) {
    for (const auto& table : intratier_loss(cfg, maps, axis, values, m.trials, m.seed)) {
      auto& csv = tables.at(table.metric);
      for (const auto& r : table.rows) {
        csv.row()
            .add(axis == LossAxis::DelaySweep ? "mean_delay_ms" : "num_coordinated")
            .add(axis == LossAxis::DelaySweep ? ms(r.axis) : r.axis)
            .add(metric_name(table.metric))
            .add(r.cross.mean)
            .add(r.cross.std_error)
            .add(r.intra.mean)
            .add(r.intra.std_error)
            .add(r.loss)
            .add(r.loss_std_error)
            .add(std::uint64_t{r.cross.trials})
            .add(r.cross.seed);
      }
    }
  };
  emit(LossAxis::DelaySweep, cfg.sweep.delay_means);
  if (!ls.empty()) emit(LossAxis::LSweep, ls);
  Outputs out;
  for (const auto& [metric, csv] : tables) out[csv_name("intratier_loss", metric)] = csv.str();
  return out;
}

Outputs bounds_csv(const ExperimentConfig& cfg, const RunManifest& m, const std::string& digest) {
  CsvTable csv(digest, {"beta", "empirical_cdf", "empirical_se", "upper_bound",
                        "lower_bound_or_fault", "dominance_lhs", "dominance_rhs"});
  for (const auto& r : bounds_validation(cfg, m.trials, m.seed)) {
    csv.row().add(r.beta).add(r.empirical_cdf).add(r.empirical_se).add(r.upper_bound);
    if (const auto* v = std::get_if<double>(&r.lower_bound)) {
      csv.add(*v);
    } else {
      csv.add("fault:" + std::get<std::string>(r.lower_bound));
    }
    r.dominance_lhs ? csv.add(*r.dominance_lhs) : csv.add("NA");
    r.dominance_rhs ? csv.add(*r.dominance_rhs) : csv.add("NA");
  }
  return {{"bounds_validation.csv", csv.str()}};
}

Outputs time_fraction_csv(const ExperimentConfig& cfg, const RunManifest& m,
                          const std::string& digest) {
  CsvTable csv(digest, {"tier", "mean_delay_ms", "mean_block_ms", "tau_lemma1",
                        "tau_lemma1_std_error", "tau_renewal", "tau_renewal_std_error",
                        "renewal_blocks", "seed"});
  for (std::size_t k = 0; k < cfg.network.tiers.size(); ++k) {
    const auto& delay = cfg.overhead.delay_for(k);
    const auto lemma = time_fraction_lemma1(cfg.overhead.coherence, delay, m.seed);
    Rng rng = make_stream(m.seed, k);
    const auto renewal =
        time_fraction_renewal(cfg.overhead.coherence, delay, rng, cfg.sweep.renewal_blocks);
    csv.row()
        .add(std::uint64_t{k})
        .add(ms(delay.mean()))
        .add(ms(cfg.overhead.coherence.mean_block))
        .add(lemma.value)
        .add(lemma.std_error)
        .add(renewal.value)
        .add(renewal.std_error)
        .add(std::uint64_t{cfg.sweep.renewal_blocks})
        .add(m.seed);
  }
  return {{"time_fractions.csv", csv.str()}};
}

Outputs dispatch(const ExperimentConfig& cfg, const RunManifest& m, const std::string& digest) {
  switch (m.experiment) {
    case Experiment::DelaySweep: return delay_sweep_csv(cfg, m, digest);
    case Experiment::LSweep: return l_sweep_csv(cfg, m, digest);
    case Experiment::IntraTierLoss: return intratier_loss_csv(cfg, m, digest);
    case Experiment::BoundsValidation: return bounds_csv(cfg, m, digest);
    case Experiment::TimeFractionReport: return time_fraction_csv(cfg, m, digest);
  }
  throw std::logic_error("unknown experiment");
}

std::string manifest_json(const ExperimentConfig& cfg, const RunManifest& m,
                          const std::string& digest, const std::vector<std::string>& files) {
  nlohmann::json j;
  j["artifact_version"] = kVersion;
  j["config"] = nlohmann::json::parse(to_json(cfg));
  j["config_digest"] = digest;
  j["config_path"] = m.config_path.string();
  j["experiment"] = experiment_name(m.experiment);
  j["files"] = files;
  j["seed"] = m.seed;
  j["trials"] = m.trials;
  return j.dump(2) + "\n";
}

RunResult fail(int code, std::string message) { return {code, std::move(message), {}}; }

}  // namespace

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& [e, n] : kNames) {
    if (name == n) return e;
  }
  return std::nullopt;
}

const char* experiment_name(Experiment experiment) {
  for (const auto& [e, n] : kNames) {
    if (e == experiment) return n;
  }
  return "unknown";
}

std::vector<std::string> output_files(Experiment experiment) {
  std::vector<std::string> files;
  switch (experiment) {
    case Experiment::DelaySweep:
      files = {"delay_sweep_coverage.csv", "delay_sweep_throughput.csv"};
      break;
    case Experiment::LSweep:
      files = {"l_sweep_coverage.csv", "l_sweep_throughput.csv"};
      break;
    case Experiment::IntraTierLoss:
      files = {"intratier_loss_coverage.csv", "intratier_loss_throughput.csv"};
      break;
    case Experiment::BoundsValidation:
      files = {"bounds_validation.csv"};
      break;
    case Experiment::TimeFractionReport:
      files = {"time_fractions.csv"};
      break;
  }
  files.push_back("manifest.json");
  return files;
}

RunResult run(const RunManifest& manifest) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(manifest.config_path);
  } catch (const ConfigError& e) {
    return fail(kValidation, e.what());
  }
  if (const auto violations = validate(cfg); !violations.empty()) {
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& v : violations) msg << "\n  " << v.field << ": " << v.message;
    return fail(kValidation, msg.str());
  }
  if (manifest.trials == 0) return fail(kValidation, "trials must be positive");

  const auto names = output_files(manifest.experiment);
  if (!manifest.force) {
    for (const auto& n : names) {
      if (fs::exists(manifest.output_dir / n)) {
        return fail(kRuntime, (manifest.output_dir / n).string() +
                                  " exists; pass --force to overwrite");
      }
    }
  }

  const std::string digest = config_digest(cfg);
  Outputs outputs;
  try {
    outputs = dispatch(cfg, manifest, digest);
  } catch (const ConfigError& e) {
    return fail(kValidation, e.what());
  } catch (const std::exception& e) {
    return fail(kRuntime, e.what());
  }

  RunResult result;
  try {
    fs::create_directories(manifest.output_dir);
    for (const auto& n : names) {
      const auto path = manifest.output_dir / n;
      if (n == "manifest.json") {
        write_file(path, manifest_json(cfg, manifest, digest, names));
      } else {
        write_file(path, outputs.at(n));
      }
      result.files.push_back(path);
    }
  } catch (const std::exception& e) {
    return fail(kRuntime, e.what());
  }
  result.message = "wrote " + std::to_string(result.files.size()) + " files to " +
                   manifest.output_dir.string();
  return result;
}

}  // namespace hetcomp::cli
