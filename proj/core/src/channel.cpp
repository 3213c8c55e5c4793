#include "hetcomp/channel.hpp"

#include <bit>
#include <cmath>

#include "hetcomp/error.hpp"

namespace hetcomp {

int PhaseSubset::size() const noexcept { return std::popcount(mask); }

double rho_factor(bool cooperating, double bits, int antennas) {
  if (!cooperating) return 1.0;
  if (antennas < 2) throw ConfigError("zero-forcing requires >= 2 antennas");
  return std::exp2(-bits / static_cast<double>(antennas - 1));
}

FadingDraw draw_fading(const SpatialRealization& realization, int serving_antennas, Rng& rng) {
  FadingDraw f;
  f.serving_components.resize(static_cast<std::size_t>(serving_antennas));
  for (auto& c : f.serving_components) c = unit_exponential(rng);
  f.field_gains.resize(realization.num_tiers());
  for (std::size_t k = 0; k < realization.num_tiers(); ++k) {
    auto& g = f.field_gains[k];
    g.resize(realization.sq_distances[k].size());
    for (auto& x : g) x = unit_exponential(rng);
  }
  return f;
}

GainDraw gains_for(const FadingDraw& fading, int num_coordinated) {
  GainDraw g;
  const auto n = fading.serving_components.size() - static_cast<std::size_t>(num_coordinated);
  for (std::size_t j = 0; j < n; ++j) g.serving_gain += fading.serving_components[j];
  g.interferer_gains = fading.field_gains;
  return g;
}

GainDraw draw_gains(const SpatialRealization& realization, std::span<const TierConfig> tiers,
                    const CoordinationSet& coordination, Rng& rng) {
  const int antennas = tiers[coordination.serving.tier].antennas;
  return gains_for(draw_fading(realization, antennas, rng),
                   static_cast<int>(coordination.members.size()));
}

ReceivedField received_field(const SpatialRealization& realization,
                             std::span<const TierConfig> tiers,
                             const std::vector<std::vector<double>>& gains) {
  ReceivedField field;
  field.power.resize(realization.num_tiers());
  for (std::size_t k = 0; k < realization.num_tiers(); ++k) {
    const auto& d = realization.sq_distances[k];
    const double half_alpha = -0.5 * tiers[k].pathloss;
    auto& p = field.power[k];
    p.resize(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      p[i] = tiers[k].power * gains[k][i] * std::pow(d[i], half_alpha);
    }
    field.tail += tiers[k].power * realization.tail_mean[k];
  }
  return field;
}

SirEvaluator::SirEvaluator(const SpatialRealization& realization,
                           std::span<const TierConfig> tiers,
                           const CoordinationSet& coordination, const GainDraw& gains)
    : SirEvaluator(received_field(realization, tiers, gains.interferer_gains),
                   gains.serving_gain *
                       tiers[coordination.serving.tier].power *
                       std::pow(realization.sq_distances[coordination.serving.tier].front(),
                                -0.5 * tiers[coordination.serving.tier].pathloss),
                   tiers, coordination) {}

SirEvaluator::SirEvaluator(const ReceivedField& field, double signal,
                           std::span<const TierConfig> tiers,
                           const CoordinationSet& coordination)
    : signal_(signal) {
  const auto L = coordination.members.size();
  member_power_.resize(L);
  member_rho_.resize(L);

  // Members of a tier appear in ascending index order (the selection merges
  // per-tier heads), so one cursor per tier marks them while summing.
  std::vector<std::vector<std::size_t>> marked(field.power.size());
  for (std::size_t j = 0; j < L; ++j) {
    const auto& m = coordination.members[j];
    marked[m.tier].push_back(m.index);
    member_power_[j] = field.power[m.tier][m.index];
    const auto& t = tiers[m.tier];
    member_rho_[j] = rho_factor(true, t.feedback_bits, t.antennas);
  }

  double rest = 0.0;
  for (std::size_t k = 0; k < field.power.size(); ++k) {
    const auto& p = field.power[k];
    std::size_t cursor = 0;
    const std::size_t first = (k == coordination.serving.tier) ? 1 : 0;
    for (std::size_t i = first; i < p.size(); ++i) {
      if (cursor < marked[k].size() && marked[k][cursor] == i) {
        ++cursor;
        continue;
      }
      rest += p[i];
    }
  }
  uncoordinated_ = rest + field.tail;
}

double SirEvaluator::interference(PhaseSubset subset) const noexcept {
  double total = uncoordinated_;
  for (std::size_t j = 0; j < member_power_.size(); ++j) {
    total += (subset.contains(j) ? member_rho_[j] : 1.0) * member_power_[j];
  }
  return total;
}

double compute_sir(const SpatialRealization& realization, std::span<const TierConfig> tiers,
                   const CoordinationSet& coordination, PhaseSubset subset,
                   const GainDraw& gains) {
  return SirEvaluator(realization, tiers, coordination, gains).sir(subset);
}

double interference_removed_m(const SpatialRealization& realization,
                              std::span<const TierConfig> tiers, const GainDraw& gains,
                              std::size_t m) {
  const auto& d = realization.sq_distances.front();
  const auto& s = gains.interferer_gains.front();
  const double half_alpha = -0.5 * tiers.front().pathloss;
  double total = 0.0;
  for (std::size_t i = m; i < d.size(); ++i) total += s[i] * std::pow(d[i], half_alpha);
  return total + realization.tail_mean.front();
}

}  // namespace hetcomp
