#include "hetcomp/experiment.hpp"

#include <cmath>
#include <limits>

namespace hetcomp {

ExperimentConfig reference_hetnet() {
  ExperimentConfig config;
  auto tier = [](double power, int antennas, double pathloss, double density) {
    return TierConfig{power, antennas, pathloss, density, 3.0 * (antennas - 1)};
  };
  config.network.tiers = {tier(40.0, 8, 4.0, 1e-6), tier(2.0, 4, 3.5, 1e-5),
                          tier(0.2, 2, 3.0, 1e-4)};
  config.network.num_coordinated = 1;
  config.network.policy = CoordinationPolicy::CrossTier;
  config.network.serving_tier = 0;
  config.overhead.coherence = CoherenceModel::deterministic(0.080);
  config.overhead.delay = DelayModel::erlang(config.sweep.delay_stages, 0.020);
  return config;
}

std::vector<Violation> validate(const ExperimentConfig& config) {
  auto out = validate(config.network);
  auto append = [&out](std::vector<Violation> more, const std::string& prefix) {
    for (auto& v : more) {
      v.field = prefix + v.field;
      out.push_back(std::move(v));
    }
  };
  append(validate(config.overhead, config.network.tiers.size()), "overhead.");
  append(validate(config.coverage), "coverage.");
  append(validate(config.throughput), "throughput.");

  const auto& sweep = config.sweep;
  for (double d : sweep.delay_means) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      out.push_back({"sweep.delay_means", "delay means must be finite and non-negative"});
      break;
    }
  }
  for (int l : sweep.l_values) {
    if (l < 0) {
      out.push_back({"sweep.l_values", "L values must be non-negative"});
      break;
    }
    for (std::size_t k : serving_candidates(config.network)) {
      if (k < config.network.tiers.size() && l >= config.network.tiers[k].antennas) {
        out.push_back({"sweep.l_values", "L values must be < serving antennas"});
        break;
      }
    }
  }
  for (double b : sweep.beta_db) {
    if (!std::isfinite(b)) {
      out.push_back({"sweep.beta_db", "thresholds must be finite"});
      break;
    }
  }
  if (sweep.delay_stages < 1) {
    out.push_back({"sweep.delay_stages", "delay_stages must be at least 1"});
  }
  if (!(sweep.l_sweep_delay_mean >= 0.0) || !std::isfinite(sweep.l_sweep_delay_mean)) {
    out.push_back({"sweep.l_sweep_delay_mean", "l_sweep_delay_mean must be non-negative"});
  }
  if (sweep.renewal_blocks < 1) {
    out.push_back({"sweep.renewal_blocks", "renewal_blocks must be positive"});
  }
  return out;
}

}  // namespace hetcomp
