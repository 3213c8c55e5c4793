#pragma once

#include <cstddef>
#include <vector>

#include "hetcomp/model.hpp"
#include "hetcomp/overhead.hpp"

namespace hetcomp {

/// Sweep axes used by the experiment drivers. Delays in seconds, SIR
/// thresholds in dB.
struct SweepConfig {
  std::vector<double> delay_means{0.0, 0.010, 0.020, 0.040, 0.048, 0.060, 0.080};
  std::vector<int> l_values{0, 1, 2, 3, 4, 5};
  std::vector<double> beta_db{-10.0, -7.5, -5.0, -2.5, 0.0, 2.5, 5.0,
                              7.5,   10.0, 12.5, 15.0, 17.5, 20.0};
  int delay_stages = 4;
  double l_sweep_delay_mean = 0.020;
  std::size_t renewal_blocks = 1'000'000;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

/// Everything a run needs besides seed and trial count.
struct ExperimentConfig {
  NetworkConfig network;
  OverheadConfig overhead;
  RateMapping coverage = RateMapping::fixed_target(db_to_linear(3.0));
  RateMapping throughput = RateMapping::shannon(db_to_linear(3.0));
  TimeFractionEstimator estimator = TimeFractionEstimator::Lemma1;
  SweepConfig sweep;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Three-tier macro/pico/femto reference deployment (serving tier 0, L = 1,
/// B_k = 3 (N_k - 1), 80 ms blocks, 4-stage 20 ms backhaul delay, 3 dB SIR
/// target and Shannon gap).
ExperimentConfig reference_hetnet();

std::vector<Violation> validate(const ExperimentConfig& config);

}  // namespace hetcomp
