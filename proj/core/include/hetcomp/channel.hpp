#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hetcomp/association.hpp"
#include "hetcomp/geometry.hpp"
#include "hetcomp/model.hpp"
#include "hetcomp/random.hpp"

namespace hetcomp {

/// Raw fading for one realization, independent of L so the same draw can be
/// reused across coordination sizes and policies.
///
/// serving_components holds N unit-mean exponentials for the serving BS; the
/// effective gain after spending L dimensions on nulling is the sum of the
/// first N - L. field_gains[k][i] is the unit-mean exponential gain of every
/// sampled point, the serving point included (used by the I_(m) fields).
struct FadingDraw {
  std::vector<double> serving_components;
  std::vector<std::vector<double>> field_gains;
};

struct GainDraw {
  double serving_gain = 0.0;
  /// Same layout as SpatialRealization::sq_distances. The serving BS's entry
  /// is ignored by compute_sir.
  std::vector<std::vector<double>> interferer_gains;
};

/// Subset B of the coordination set in the cooperation phase: bit j set means
/// members[j] is cooperating.
struct PhaseSubset {
  std::uint32_t mask = 0;

  bool contains(std::size_t member) const noexcept { return (mask >> member) & 1U; }
  int size() const noexcept;

  static PhaseSubset none() { return {0}; }
  static PhaseSubset full(std::size_t members) {
    return {members == 0 ? 0U : static_cast<std::uint32_t>((1ULL << members) - 1)};
  }
};

inline constexpr std::size_t kMaxCoordinated = 16;

/// Interference cancellation factor. 1 outside the cooperation phase,
/// 2^(-bits / (antennas - 1)) inside it. Throws ConfigError when a cooperating
/// BS has a single antenna.
double rho_factor(bool cooperating, double bits, int antennas);

FadingDraw draw_fading(const SpatialRealization& realization, int serving_antennas, Rng& rng);

/// Serving gain ~ sum of (N - L) unit exponentials, interferer gains ~ Exp(1).
GainDraw gains_for(const FadingDraw& fading, int num_coordinated);

GainDraw draw_gains(const SpatialRealization& realization, std::span<const TierConfig> tiers,
                    const CoordinationSet& coordination, Rng& rng);

/// P_k S_{i,k} |X_{i,k}|^-alpha_k for every sampled point, plus the tail
/// compensation sum_k P_k tail_mean[k]. Independent of L and the policy.
struct ReceivedField {
  std::vector<std::vector<double>> power;
  double tail = 0.0;
};

ReceivedField received_field(const SpatialRealization& realization,
                             std::span<const TierConfig> tiers,
                             const std::vector<std::vector<double>>& gains);

/// Per-realization SIR kernel. Splits the interference into the uncoordinated
/// remainder (tail included) and one term per coordination-set member, so each
/// subset costs O(L).
class SirEvaluator {
 public:
  SirEvaluator(const SpatialRealization& realization, std::span<const TierConfig> tiers,
               const CoordinationSet& coordination, const GainDraw& gains);
  /// `signal` is P_k* S_1 |X_1|^-alpha_k*.
  SirEvaluator(const ReceivedField& field, double signal, std::span<const TierConfig> tiers,
               const CoordinationSet& coordination);

  double signal() const noexcept { return signal_; }
  /// Absolute interference power with subset B cooperating.
  double interference(PhaseSubset subset) const noexcept;
  double sir(PhaseSubset subset) const noexcept { return signal_ / interference(subset); }

  std::size_t members() const noexcept { return member_power_.size(); }
  double member_rho(std::size_t member) const noexcept { return member_rho_[member]; }

 private:
  double signal_ = 0.0;
  double uncoordinated_ = 0.0;
  std::vector<double> member_power_;
  std::vector<double> member_rho_;
};

double compute_sir(const SpatialRealization& realization, std::span<const TierConfig> tiers,
                   const CoordinationSet& coordination, PhaseSubset subset,
                   const GainDraw& gains);

/// Single-tier interference per unit power with the nearest m points removed:
/// sum over i > m of S_i |X_i|^-alpha, plus the tail mean. m = 0 keeps the
/// nearest point with its field gain.
double interference_removed_m(const SpatialRealization& realization,
                              std::span<const TierConfig> tiers, const GainDraw& gains,
                              std::size_t m);

}  // namespace hetcomp
