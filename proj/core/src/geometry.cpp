#include "hetcomp/geometry.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace hetcomp {

std::vector<double> sample_tier_distances(double density, std::size_t count, Rng& rng) {
  std::exponential_distribution<double> spacing(std::numbers::pi * density);
  std::vector<double> out(count);
  double acc = 0.0;
  for (auto& d : out) {
    acc += spacing(rng);
    d = acc;
  }
  return out;
}

std::vector<double> cumulative_distances(std::span<const double> spacings) {
  std::vector<double> out(spacings.size());
  std::partial_sum(spacings.begin(), spacings.end(), out.begin());
  return out;
}

double equivalent_intensity(std::span<const TierConfig> tiers, std::size_t serving_tier) {
  const double reference = tiers[serving_tier].power;
  double total = 0.0;
  for (const auto& t : tiers) {
    total += t.density * std::pow(t.power / reference, 2.0 / t.pathloss);
  }
  return total;
}

double tail_mean_interference(double density, double pathloss, double radius) {
  if (std::isinf(radius)) return 0.0;
  return 2.0 * std::numbers::pi * density * std::pow(radius, 2.0 - pathloss) / (pathloss - 2.0);
}

SpatialRealization sample_nearest(const NetworkConfig& config, Rng& rng) {
  SpatialRealization r;
  r.sq_distances.resize(config.tiers.size());
  r.tail_mean.assign(config.tiers.size(), 0.0);
  for (std::size_t k = 0; k < config.tiers.size(); ++k) {
    r.sq_distances[k] = sample_tier_distances(config.tiers[k].density, 1, rng);
  }
  return r;
}

void extend_realization(SpatialRealization& realization, const NetworkConfig& config,
                        Rng& rng) {
  const auto target = static_cast<std::size_t>(config.truncation_points_per_tier);
  for (std::size_t k = 0; k < config.tiers.size(); ++k) {
    auto& d = realization.sq_distances[k];
    std::exponential_distribution<double> spacing(std::numbers::pi * config.tiers[k].density);
    d.reserve(target);
    while (d.size() < target) d.push_back(d.back() + spacing(rng));
  }
  refresh_tail(realization, config);
}

void refresh_tail(SpatialRealization& realization, const NetworkConfig& config) {
  realization.tail_mean.assign(config.tiers.size(), 0.0);
  if (!config.tail_compensation) return;
  for (std::size_t k = 0; k < config.tiers.size(); ++k) {
    const auto& t = config.tiers[k];
    realization.tail_mean[k] =
        tail_mean_interference(t.density, t.pathloss, std::sqrt(realization.sq_distances[k].back()));
  }
}

}  // namespace hetcomp
