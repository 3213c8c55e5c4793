#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hetcomp/model.hpp"
#include "hetcomp/random.hpp"

namespace hetcomp {

/// Distances from the typical user (origin) to the sampled base stations.
///
/// Only distances are kept: every quantity downstream depends on |X| alone.
/// sq_distances[k] is strictly increasing; entry i is the (i+1)-th nearest
/// BS of tier k. tail_mean[k] is the expected interference per unit transmit
/// power (fading mean 1) from tier-k points beyond the last sampled one, or 0
/// when tail compensation is off.
struct SpatialRealization {
  std::vector<std::vector<double>> sq_distances;
  std::vector<double> tail_mean;

  std::size_t num_tiers() const noexcept { return sq_distances.size(); }
};

/// Ascending squared distances of the `count` nearest points of a planar PPP
/// with the given density: cumulative sums of Exp(pi * density) spacings.
std::vector<double> sample_tier_distances(double density, std::size_t count, Rng& rng);

/// Cumulative sum of spacings already scaled to squared distance.
std::vector<double> cumulative_distances(std::span<const double> spacings);

/// Sum over tiers of density_k * (P_k / P_serving)^(2 / alpha_k).
double equivalent_intensity(std::span<const TierConfig> tiers, std::size_t serving_tier);

/// 2 pi density radius^(2 - alpha) / (alpha - 2): mean unit-power interference
/// from a PPP beyond `radius`.
double tail_mean_interference(double density, double pathloss, double radius);

/// Nearest point of every tier only. Cheap first stage for rejection on the
/// serving tier; complete with extend_realization.
SpatialRealization sample_nearest(const NetworkConfig& config, Rng& rng);

/// Appends points until every tier holds truncation_points_per_tier, then
/// fills tail_mean. Conditionally on the nearest points this is an exact
/// continuation of the process.
void extend_realization(SpatialRealization& realization, const NetworkConfig& config,
                        Rng& rng);

/// Recomputes tail_mean from the last sampled point of every tier.
void refresh_tail(SpatialRealization& realization, const NetworkConfig& config);

}  // namespace hetcomp
