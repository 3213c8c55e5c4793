#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetcomp/channel.hpp"
#include "hetcomp/model.hpp"
#include "hetcomp/random.hpp"

namespace hetcomp {

/// Coherence block length T ~ Gamma(shape M, scale mean / M), so E[T] = mean
/// for every M. No shape means T is deterministic.
struct CoherenceModel {
  double mean_block = 0.080;  // seconds
  std::optional<int> shape;

  static CoherenceModel deterministic(double mean_block) { return {mean_block, std::nullopt}; }
  static CoherenceModel gamma(double mean_block, int shape) { return {mean_block, shape}; }

  bool is_deterministic() const noexcept { return !shape.has_value(); }
  /// eta = 1 / E[T].
  double change_rate() const noexcept { return 1.0 / mean_block; }

  friend bool operator==(const CoherenceModel&, const CoherenceModel&) = default;
};

/// Overhead delay D = fixed_offset + sum_j Exp(stage_rates[j]): a tandem of
/// exponential backhaul servers behind a constant propagation offset.
struct DelayModel {
  std::vector<double> stage_rates;  // per second
  double fixed_offset = 0.0;        // seconds

  static DelayModel none() { return {}; }
  static DelayModel constant(double delay) { return {{}, delay}; }
  /// `stages` equal servers with the given total mean; mean 0 gives none().
  static DelayModel erlang(int stages, double mean);

  double mean() const noexcept;
  bool is_zero() const noexcept { return stage_rates.empty() && fixed_offset == 0.0; }

  friend bool operator==(const DelayModel&, const DelayModel&) = default;
};

/// Overhead configuration of an experiment. tier_delay[k], when set,
/// overrides `delay` for coordinated BSs of tier k.
struct OverheadConfig {
  CoherenceModel coherence;
  DelayModel delay;
  std::vector<std::optional<DelayModel>> tier_delay;

  const DelayModel& delay_for(std::size_t tier) const;

  friend bool operator==(const OverheadConfig&, const OverheadConfig&) = default;
};

std::vector<Violation> validate(const CoherenceModel& model);
std::vector<Violation> validate(const DelayModel& model, const std::string& field = "delay");
std::vector<Violation> validate(const OverheadConfig& config, std::size_t num_tiers);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

double sample_coherence(const CoherenceModel& model, Rng& rng);
double sample_delay(const DelayModel& model, Rng& rng);

/// P(D <= t), exact. Stage sums are evaluated by uniformization of the
/// phase-type generator, which stays stable when stage rates coincide.
double delay_cdf(const DelayModel& model, double t);

/// E[D 1{D <= t}] = integral over [0, t] of {F(t) - F(s)} ds, by adaptive
/// Gauss-Kronrod quadrature on the exact CDF.
double delay_partial_mean(const DelayModel& model, double t);

/// p(T, s) = P(D <= T, D <= s). Exact for deterministic T; otherwise a
/// seeded Monte Carlo estimate with std_error <= 1e-3.
Estimate joint_prob(const CoherenceModel& coherence, const DelayModel& delay, double s,
                    std::uint64_t seed = 0);

enum class TimeFractionEstimator { Lemma1, RenewalOracle };

struct TimeFraction {
  double value = 1.0;
  double std_error = 0.0;
  TimeFractionEstimator estimator = TimeFractionEstimator::Lemma1;
};

/// tau = p(T, inf) - eta * integral_0^inf {p(T, inf) - p(T, s)} ds, using the
/// identity integral = E[D 1{D <= T}]. Exact for deterministic T, seeded Monte
/// Carlo otherwise. Clamped to [0, 1].
TimeFraction time_fraction_lemma1(const CoherenceModel& coherence, const DelayModel& delay,
                                  std::uint64_t seed = 0);

/// Renewal-reward oracle: sum (T - D)^+ / sum T over `blocks` i.i.d. blocks.
TimeFraction time_fraction_renewal(const CoherenceModel& coherence, const DelayModel& delay,
                                   Rng& rng, std::size_t blocks);

/// Cooperation-phase time fraction for coordinated BSs of each tier. Built
/// once per experiment and read-only afterwards.
class TimeFractions {
 public:
  TimeFractions() = default;
  TimeFractions(std::vector<double> per_tier, TimeFractionEstimator estimator);

  static TimeFractions compute(const OverheadConfig& overhead, std::size_t num_tiers,
                               TimeFractionEstimator estimator = TimeFractionEstimator::Lemma1,
                               std::uint64_t seed = 0, std::size_t renewal_blocks = 1'000'000);
  static TimeFractions uniform(double tau, std::size_t num_tiers);

  double tier(std::size_t k) const { return per_tier_.at(k); }
  std::span<const double> per_tier() const noexcept { return per_tier_; }
  TimeFractionEstimator estimator() const noexcept { return estimator_; }

 private:
  std::vector<double> per_tier_;
  TimeFractionEstimator estimator_ = TimeFractionEstimator::Lemma1;
};

/// p_B = prod_{j in B} tau_j * prod_{j not in B} (1 - tau_j).
double subset_probability(std::span<const double> member_tau, PhaseSubset subset);

}  // namespace hetcomp
