#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hetcomp {

/// One tier of base stations. Units: watts, base stations per m^2.
struct TierConfig {
  double power = 1.0;
  int antennas = 1;
  double pathloss = 4.0;
  double density = 1e-6;
  /// Feedback bits used by every coordinated BS of this tier. +infinity
  /// models perfect channel direction feedback (full cancellation).
  double feedback_bits = 0.0;

  friend bool operator==(const TierConfig&, const TierConfig&) = default;
};

enum class CoordinationPolicy { CrossTier, IntraTier };

struct NetworkConfig {
  std::vector<TierConfig> tiers;
  int num_coordinated = 0;
  CoordinationPolicy policy = CoordinationPolicy::CrossTier;
  /// Zero-based tier index the serving BS is conditioned on, if any.
  std::optional<std::size_t> serving_tier;
  int truncation_points_per_tier = 200;
  bool tail_compensation = true;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

enum class RateKind { FixedTarget, ShannonGap };

/// SIR-to-rate mapping. All ratios are linear.
struct RateMapping {
  RateKind kind = RateKind::ShannonGap;
  double target_sir = 1.0;   // FixedTarget only
  double target_rate = 1.0;  // FixedTarget only, bits/s/Hz
  double shannon_gap = 1.0;  // ShannonGap only

  static RateMapping fixed_target(double target_sir, double target_rate = 1.0) {
    return {RateKind::FixedTarget, target_sir, target_rate, 1.0};
  }
  static RateMapping shannon(double gap) {
    return {RateKind::ShannonGap, 1.0, 1.0, gap};
  }

  friend bool operator==(const RateMapping&, const RateMapping&) = default;
};

struct Violation {
  std::string field;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate(const TierConfig& tier, std::size_t index);
std::vector<Violation> validate(const NetworkConfig& config);
std::vector<Violation> validate(const RateMapping& mapping);

/// Tiers whose nearest BS may serve: the conditioned tier or all of them.
std::vector<std::size_t> serving_candidates(const NetworkConfig& config);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace hetcomp
