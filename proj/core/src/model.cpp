#include "hetcomp/model.hpp"

#include <cmath>
#include <string>

namespace hetcomp {

namespace {

std::string tier_field(std::size_t index, const char* name) {
  return "tiers[" + std::to_string(index) + "]." + name;
}

}  // namespace

std::vector<Violation> validate(const TierConfig& tier, std::size_t index) {
  std::vector<Violation> out;
  if (!(tier.power > 0.0) || !std::isfinite(tier.power)) {
    out.push_back({tier_field(index, "power"), "power must be positive"});
  }
  if (!(tier.density > 0.0) || !std::isfinite(tier.density)) {
    out.push_back({tier_field(index, "density"), "density must be positive"});
  }
  if (tier.antennas < 1) {
    out.push_back({tier_field(index, "antennas"), "antennas must be at least 1"});
  }
  if (!(tier.pathloss > 2.0) || !std::isfinite(tier.pathloss)) {
    out.push_back({tier_field(index, "pathloss"), "pathloss must exceed 2"});
  }
  const double bits = tier.feedback_bits;
  if (std::isnan(bits) || bits < 0.0 || (std::isfinite(bits) && bits != std::floor(bits))) {
    out.push_back({tier_field(index, "feedback_bits"),
                   "feedback_bits must be a non-negative integer or infinite"});
  }
  return out;
}

std::vector<std::size_t> serving_candidates(const NetworkConfig& config) {
  if (config.serving_tier && *config.serving_tier < config.tiers.size()) {
    return {*config.serving_tier};
  }
  std::vector<std::size_t> all(config.tiers.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return all;
}

std::vector<Violation> validate(const NetworkConfig& config) {
  std::vector<Violation> out;
  if (config.tiers.empty()) {
    out.push_back({"tiers", "at least one tier is required"});
  }
  for (std::size_t k = 0; k < config.tiers.size(); ++k) {
    auto tier = validate(config.tiers[k], k);
    out.insert(out.end(), tier.begin(), tier.end());
  }
  if (config.num_coordinated < 0) {
    out.push_back({"num_coordinated", "num_coordinated must be non-negative"});
  }
  if (config.truncation_points_per_tier < 1) {
    out.push_back({"truncation_points_per_tier", "truncation_points_per_tier must be positive"});
  }
  if (config.serving_tier && *config.serving_tier >= config.tiers.size()) {
    out.push_back({"serving_tier", "serving_tier must index a configured tier"});
  }
  if (config.num_coordinated > 0 && !config.tiers.empty()) {
    for (std::size_t k : serving_candidates(config)) {
      if (config.num_coordinated >= config.tiers[k].antennas) {
        out.push_back({"num_coordinated", "num_coordinated must be < serving antennas (tier " +
                                              std::to_string(k) + " has " +
                                              std::to_string(config.tiers[k].antennas) + ")"});
      }
    }
    // Tiers that may hold coordinated BSs need a null-space to steer into.
    for (std::size_t k = 0; k < config.tiers.size(); ++k) {
      bool admissible = config.policy == CoordinationPolicy::CrossTier;
      if (!admissible) {
        for (std::size_t s : serving_candidates(config)) admissible |= (s == k);
      }
      if (admissible && config.tiers[k].antennas < 2) {
        out.push_back({tier_field(k, "antennas"),
                       "zero-forcing requires >= 2 antennas at coordinated BSs"});
      }
    }
    const auto needed = static_cast<long>(config.num_coordinated);
    long admissible_points = config.policy == CoordinationPolicy::CrossTier
                                 ? static_cast<long>(config.tiers.size()) *
                                           config.truncation_points_per_tier - 1
                                 : config.truncation_points_per_tier - 1;
    if (config.truncation_points_per_tier >= 1 && admissible_points < needed) {
      out.push_back({"truncation_points_per_tier",
                     "too few sampled points to fill the coordination set"});
    }
  }
  return out;
}

std::vector<Violation> validate(const RateMapping& mapping) {
  std::vector<Violation> out;
  if (mapping.kind == RateKind::FixedTarget) {
    if (!(mapping.target_sir > 0.0)) out.push_back({"target_sir", "target_sir must be positive"});
    if (!(mapping.target_rate > 0.0)) {
      out.push_back({"target_rate", "target_rate must be positive"});
    }
  } else if (!(mapping.shannon_gap >= 1.0)) {
    out.push_back({"shannon_gap", "shannon_gap must be >= 1 (0 dB)"});
  }
  return out;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace hetcomp
