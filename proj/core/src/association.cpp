#include "hetcomp/association.hpp"

#include <cmath>
#include <string>

#include "hetcomp/error.hpp"

namespace hetcomp {

double average_power(const TierConfig& tier, double sq_distance) {
  return tier.power * std::pow(sq_distance, -0.5 * tier.pathloss);
}

ServingSelection select_serving(const SpatialRealization& realization,
                                std::span<const TierConfig> tiers) {
  ServingSelection best{0, -1.0};
  for (std::size_t k = 0; k < tiers.size(); ++k) {
    const double p = average_power(tiers[k], realization.sq_distances[k].front());
    if (p > best.average_power) best = {k, p};
  }
  return best;
}

CoordinationSet select_coordination_set(const SpatialRealization& realization,
                                        std::span<const TierConfig> tiers,
                                        int num_coordinated, CoordinationPolicy policy,
                                        std::size_t serving_tier) {
  CoordinationSet set;
  set.serving = {serving_tier, 0};
  set.policy = policy;
  if (num_coordinated <= 0) return set;

  // Within a tier power falls with rank, so the global top-L is a K-way merge
  // of per-tier heads. Ties keep the lower (tier, index).
  const std::size_t K = tiers.size();
  std::vector<std::size_t> head(K, 0);
  head[serving_tier] = 1;
  auto admitted = [&](std::size_t k) {
    return policy == CoordinationPolicy::CrossTier || k == serving_tier;
  };

  set.members.reserve(static_cast<std::size_t>(num_coordinated));
  while (set.members.size() < static_cast<std::size_t>(num_coordinated)) {
    std::size_t best_tier = K;
    double best_power = -1.0;
    for (std::size_t k = 0; k < K; ++k) {
      if (!admitted(k) || head[k] >= realization.sq_distances[k].size()) continue;
      const double p = average_power(tiers[k], realization.sq_distances[k][head[k]]);
      if (p > best_power) {
        best_power = p;
        best_tier = k;
      }
    }
    if (best_tier == K) {
      throw InsufficientCandidates(
          "insufficient sampled points: coordination set needs " +
          std::to_string(num_coordinated) + " members but only " +
          std::to_string(set.members.size()) +
          " are admissible; raise truncation_points_per_tier");
    }
    set.members.push_back({best_tier, head[best_tier]});
    ++head[best_tier];
  }
  return set;
}

}  // namespace hetcomp
