#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "hetcomp/geometry.hpp"
#include "hetcomp/model.hpp"

namespace hetcomp {

/// A sampled base station: tier and zero-based distance rank within the tier
/// (index 0 is the nearest BS of that tier).
struct BsId {
  std::size_t tier = 0;
  std::size_t index = 0;

  friend auto operator<=>(const BsId&, const BsId&) = default;
};

struct ServingSelection {
  std::size_t tier = 0;
  double average_power = 0.0;
};

struct CoordinationSet {
  BsId serving;
  /// Sorted by descending average received power.
  std::vector<BsId> members;
  CoordinationPolicy policy = CoordinationPolicy::CrossTier;

  std::size_t size() const noexcept { return members.size(); }
};

/// P * d^-alpha from a squared distance.
double average_power(const TierConfig& tier, double sq_distance);

/// Maximum average received power over the nearest BS of each tier. Ties go to
/// the lowest tier index.
ServingSelection select_serving(const SpatialRealization& realization,
                                std::span<const TierConfig> tiers);

/// The L strongest interferers by average power, serving BS excluded.
/// IntraTier admits only the serving tier. Throws InsufficientCandidates when
/// fewer than L points are admissible.
CoordinationSet select_coordination_set(const SpatialRealization& realization,
                                        std::span<const TierConfig> tiers,
                                        int num_coordinated, CoordinationPolicy policy,
                                        std::size_t serving_tier);

}  // namespace hetcomp
