#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hetcomp/channel.hpp"
#include "hetcomp/experiment.hpp"
#include "hetcomp/geometry.hpp"
#include "hetcomp/overhead.hpp"

namespace hetcomp {

enum class Metric { Coverage, Throughput };

/// FixedTarget maps to Coverage (reported normalized by the target rate),
/// ShannonGap to Throughput.
Metric metric_for(const RateMapping& mapping);
const char* metric_name(Metric metric);

struct EvalResult {
  Metric metric = Metric::Throughput;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string config_digest;

  friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

double rate_coverage(double sir, const RateMapping& mapping);
double rate_shannon(double sir, const RateMapping& mapping);
/// Dispatches on mapping.kind.
double rate(double sir, const RateMapping& mapping);

/// One network trial: conditioned realization plus L-independent fading.
struct TrialSample {
  SpatialRealization realization;
  std::size_t serving_tier = 0;
  FadingDraw fading;
};

/// Deterministic in (config, seed, trial). Rejects realizations until the
/// serving BS lies in network.serving_tier, when that is set.
TrialSample sample_trial(const NetworkConfig& network, std::uint64_t seed, std::uint64_t trial);

/// A framework evaluation sharing trials with others in the same batch.
struct Scenario {
  int num_coordinated = 0;
  CoordinationPolicy policy = CoordinationPolicy::CrossTier;
  TimeFractions fractions;
  /// Evaluate only B = B_L with probability 1.
  bool full_subset_only = false;
  /// Dimensions the serving BS spends on nulling; defaults to num_coordinated.
  std::optional<int> nulling_dimensions;
};

struct BatchResult {
  /// summary[s][m] for scenario s and mapping m.
  std::vector<std::vector<EvalResult>> summary;
  /// per_trial[s][m][t], kept only when requested.
  std::vector<std::vector<std::vector<double>>> per_trial;
};

/// Runs every scenario on the same trials (common random numbers). Trials
/// fan out over hardware threads; results are reduced in trial order, so the
/// output does not depend on the thread count.
BatchResult evaluate_batch(const ExperimentConfig& config, std::span<const Scenario> scenarios,
                           std::span<const RateMapping> mappings, std::size_t trials,
                           std::uint64_t seed, bool keep_trials = false);

/// Scenario of the configured network with tau from its overhead model.
Scenario configured_scenario(const ExperimentConfig& config);

EvalResult long_term_throughput(const ExperimentConfig& config, const RateMapping& mapping,
                                std::size_t trials, std::uint64_t seed);
EvalResult ideal_throughput(const ExperimentConfig& config, const RateMapping& mapping,
                            std::size_t trials, std::uint64_t seed);

/// Per-trial, per-subset rates R(gamma_B) and probabilities p_B for one
/// scenario; index [trial][subset mask].
struct SubsetLog {
  std::vector<std::vector<double>> rates;
  std::vector<std::vector<double>> probabilities;
};
SubsetLog subset_rate_log(const ExperimentConfig& config, const Scenario& scenario,
                          const RateMapping& mapping, std::size_t trials, std::uint64_t seed);

struct SweepRow {
  double axis = 0.0;
  EvalResult comp;
  std::optional<EvalResult> baseline;
};

struct SweepTable {
  Metric metric = Metric::Throughput;
  std::vector<SweepRow> rows;
};

/// One table per mapping. Each delay mean is realised with
/// sweep.delay_stages equal exponential stages; the baseline is the L = 0
/// network on the same trials.
std::vector<SweepTable> delay_sweep(const ExperimentConfig& config,
                                    std::span<const RateMapping> mappings,
                                    std::span<const double> delay_means, std::size_t trials,
                                    std::uint64_t seed);

/// One row per L at mean delay sweep.l_sweep_delay_mean.
std::vector<SweepTable> l_sweep(const ExperimentConfig& config,
                                std::span<const RateMapping> mappings,
                                std::span<const int> l_values, std::size_t trials,
                                std::uint64_t seed);

enum class LossAxis { DelaySweep, LSweep };

struct LossRow {
  double axis = 0.0;
  EvalResult cross;
  EvalResult intra;
  double loss = 0.0;  // (cross - intra) / cross
  double loss_std_error = 0.0;
};

struct LossTable {
  Metric metric = Metric::Throughput;
  LossAxis axis = LossAxis::DelaySweep;
  std::vector<LossRow> rows;
};

/// CrossTier vs IntraTier on shared trials. The delay axis uses the
/// configured L, the L axis uses sweep.l_sweep_delay_mean.
std::vector<LossTable> intratier_loss(const ExperimentConfig& config,
                                      std::span<const RateMapping> mappings, LossAxis axis,
                                      std::span<const double> axis_values, std::size_t trials,
                                      std::uint64_t seed);

/// Per-trial SIR with the full coordination set cooperating.
std::vector<double> sir_samples(const ExperimentConfig& config, int num_coordinated,
                                CoordinationPolicy policy, std::size_t trials,
                                std::uint64_t seed);

struct BoundsRow {
  double beta = 0.0;
  double empirical_cdf = 0.0;
  double empirical_se = 0.0;
  double upper_bound = 1.0;
  /// Bound value, or the DomainFault reason.
  std::variant<double, std::string> lower_bound;
  /// Single-tier networks only: P(I_B > x) and P(c I_(0) > x) at
  /// x = beta (pi lambda)^(alpha/2).
  std::optional<double> dominance_lhs;
  std::optional<double> dominance_rhs;
};

/// Empirical CDF of gamma_{B_L} against the closed-form bounds on the
/// sweep.beta_db grid.
std::vector<BoundsRow> bounds_validation(const ExperimentConfig& config, std::size_t trials,
                                         std::uint64_t seed);

/// Unit-power interference draws of a single-tier network for the dominance
/// chain: I_B with the first `subset_size` interferers scaled by `rho`, and
/// I_(m) for m = 0..max_removed. Index [trial].
struct InterferenceSamples {
  std::vector<double> coordinated;
  std::vector<std::vector<double>> removed;  // removed[m][trial]
};
InterferenceSamples interference_samples(const ExperimentConfig& config, int subset_size,
                                         double rho, std::size_t max_removed,
                                         std::size_t trials, std::uint64_t seed);

}  // namespace hetcomp
