#include "hetcomp/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <thread>

#include "hetcomp/analysis.hpp"
#include "hetcomp/config_io.hpp"
#include "hetcomp/error.hpp"

namespace hetcomp {

namespace {

constexpr std::size_t kMaxRejections = 10'000'000;

std::size_t worker_count(std::size_t work) {
  std::size_t n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("HETCOMP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = static_cast<std::size_t>(v);
  }
  return std::clamp<std::size_t>(n, 1, std::max<std::size_t>(work, 1));
}

// Runs fn(t) for t in [0, n) on contiguous blocks; the first exception wins.
template <typename Fn>
void parallel_for(std::size_t n, Fn fn) {
  const std::size_t workers = worker_count(n);
  if (workers <= 1) {
    for (std::size_t t = 0; t < n; ++t) fn(t);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w * n / workers; t < (w + 1) * n / workers; ++t) fn(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  if (x.empty()) return m;
  double sum = 0.0;
  for (double v : x) sum += v;
  const double n = static_cast<double>(x.size());
  m.mean = sum / n;
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - m.mean) * (v - m.mean);
    m.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return m;
}

// Rate in the reported unit: coverage normalized by the target rate.
double reported_rate(double sir, const RateMapping& mapping) {
  if (mapping.kind == RateKind::FixedTarget) {
    return rate_coverage(sir, mapping) / mapping.target_rate;
  }
  return rate_shannon(sir, mapping);
}

double serving_signal(const TrialSample& s, std::span<const TierConfig> tiers, int nulling) {
  const TierConfig& t = tiers[s.serving_tier];
  const double gain = gains_for(s.fading, nulling).serving_gain;
  return gain * t.power * std::pow(s.realization.sq_distances[s.serving_tier].front(),
                                   -0.5 * t.pathloss);
}

std::vector<double> member_taus(const CoordinationSet& set, const TimeFractions& fractions) {
  std::vector<double> tau(set.members.size());
  for (std::size_t j = 0; j < tau.size(); ++j) tau[j] = fractions.tier(set.members[j].tier);
  return tau;
}

void check_scenario(const Scenario& s, const ExperimentConfig& config) {
  if (s.num_coordinated < 0 || static_cast<std::size_t>(s.num_coordinated) > kMaxCoordinated) {
    throw ConfigError("num_coordinated out of range");
  }
  const int nulling = s.nulling_dimensions.value_or(s.num_coordinated);
  for (std::size_t k : serving_candidates(config.network)) {
    if (nulling < 0 || nulling >= config.network.tiers[k].antennas) {
      throw ConfigError("nulling dimensions must be < serving antennas (tier " +
                        std::to_string(k) + ")");
    }
  }
  if (s.fractions.per_tier().size() != config.network.tiers.size()) {
    throw ConfigError("scenario time fractions must cover every tier");
  }
}

ExperimentConfig with_delay(const ExperimentConfig& config, double mean) {
  ExperimentConfig c = config;
  c.overhead.delay = DelayModel::erlang(config.sweep.delay_stages, mean);
  c.overhead.tier_delay.clear();
  return c;
}

TimeFractions fractions_for(const ExperimentConfig& config) {
  return TimeFractions::compute(config.overhead, config.network.tiers.size(), config.estimator,
                                0, config.sweep.renewal_blocks);
}

Scenario scenario(int L, CoordinationPolicy policy, TimeFractions fractions) {
  Scenario s;
  s.num_coordinated = L;
  s.policy = policy;
  s.fractions = std::move(fractions);
  return s;
}

}  // namespace

Metric metric_for(const RateMapping& mapping) {
  return mapping.kind == RateKind::FixedTarget ? Metric::Coverage : Metric::Throughput;
}

const char* metric_name(Metric metric) {
  return metric == Metric::Coverage ? "coverage" : "throughput";
}

double rate_coverage(double sir, const RateMapping& mapping) {
  return sir >= mapping.target_sir ? mapping.target_rate : 0.0;
}

double rate_shannon(double sir, const RateMapping& mapping) {
  return std::log2(1.0 + sir / mapping.shannon_gap);
}

double rate(double sir, const RateMapping& mapping) {
  return mapping.kind == RateKind::FixedTarget ? rate_coverage(sir, mapping)
                                               : rate_shannon(sir, mapping);
}

TrialSample sample_trial(const NetworkConfig& network, std::uint64_t seed, std::uint64_t trial) {
  Rng rng = make_stream(seed, trial);
  TrialSample s;
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt == kMaxRejections) {
      throw Error("serving tier conditioning rejected " + std::to_string(kMaxRejections) +
                  " realizations in a row");
    }
    s.realization = sample_nearest(network, rng);
    s.serving_tier = select_serving(s.realization, network.tiers).tier;
    if (!network.serving_tier || *network.serving_tier == s.serving_tier) break;
  }
  extend_realization(s.realization, network, rng);
  s.fading = draw_fading(s.realization, network.tiers[s.serving_tier].antennas, rng);
  return s;
}

BatchResult evaluate_batch(const ExperimentConfig& config, std::span<const Scenario> scenarios,
                           std::span<const RateMapping> mappings, std::size_t trials,
                           std::uint64_t seed, bool keep_trials) {
  if (trials == 0) throw ConfigError("trials must be positive");
  for (const auto& s : scenarios) check_scenario(s, config);
  const auto& tiers = config.network.tiers;
  const std::size_t S = scenarios.size(), M = mappings.size();

  std::vector<std::vector<std::vector<double>>> values(
      S, std::vector<std::vector<double>>(M, std::vector<double>(trials, 0.0)));

  parallel_for(trials, [&](std::size_t t) {
    const TrialSample sample = sample_trial(config.network, seed, t);
    const ReceivedField field = received_field(sample.realization, tiers, sample.fading.field_gains);
    for (std::size_t s = 0; s < S; ++s) {
      const Scenario& sc = scenarios[s];
      const CoordinationSet set = select_coordination_set(
          sample.realization, tiers, sc.num_coordinated, sc.policy, sample.serving_tier);
      const double signal =
          serving_signal(sample, tiers, sc.nulling_dimensions.value_or(sc.num_coordinated));
      const SirEvaluator ev(field, signal, tiers, set);
      if (sc.full_subset_only) {
        const double sir = ev.sir(PhaseSubset::full(set.size()));
        for (std::size_t m = 0; m < M; ++m) values[s][m][t] = reported_rate(sir, mappings[m]);
        continue;
      }
      const auto tau = member_taus(set, sc.fractions);
      const std::uint32_t subsets = 1U << set.size();
      for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        const PhaseSubset b{mask};
        const double p = subset_probability(tau, b);
        const double sir = ev.sir(b);
        for (std::size_t m = 0; m < M; ++m) values[s][m][t] += p * reported_rate(sir, mappings[m]);
      }
    }
  });

  const std::string digest = config_digest(config);
  BatchResult out;
  out.summary.resize(S);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t m = 0; m < M; ++m) {
      const auto mo = moments(values[s][m]);
      out.summary[s].push_back(
          {metric_for(mappings[m]), mo.mean, mo.std_error, trials, seed, digest});
    }
  }
  if (keep_trials) out.per_trial = std::move(values);
  return out;
}

Scenario configured_scenario(const ExperimentConfig& config) {
  return scenario(config.network.num_coordinated, config.network.policy, fractions_for(config));
}

EvalResult long_term_throughput(const ExperimentConfig& config, const RateMapping& mapping,
                                std::size_t trials, std::uint64_t seed) {
  const Scenario s = configured_scenario(config);
  return evaluate_batch(config, {&s, 1}, {&mapping, 1}, trials, seed).summary[0][0];
}

EvalResult ideal_throughput(const ExperimentConfig& config, const RateMapping& mapping,
                            std::size_t trials, std::uint64_t seed) {
  Scenario s = scenario(config.network.num_coordinated, config.network.policy,
                        TimeFractions::uniform(1.0, config.network.tiers.size()));
  s.full_subset_only = true;
  return evaluate_batch(config, {&s, 1}, {&mapping, 1}, trials, seed).summary[0][0];
}

SubsetLog subset_rate_log(const ExperimentConfig& config, const Scenario& scenario,
                          const RateMapping& mapping, std::size_t trials, std::uint64_t seed) {
  check_scenario(scenario, config);
  const auto& tiers = config.network.tiers;
  SubsetLog log;
  log.rates.resize(trials);
  log.probabilities.resize(trials);
  parallel_for(trials, [&](std::size_t t) {
    const TrialSample sample = sample_trial(config.network, seed, t);
    const ReceivedField field = received_field(sample.realization, tiers, sample.fading.field_gains);
    const CoordinationSet set = select_coordination_set(
        sample.realization, tiers, scenario.num_coordinated, scenario.policy, sample.serving_tier);
    const double signal = serving_signal(
        sample, tiers, scenario.nulling_dimensions.value_or(scenario.num_coordinated));
    const SirEvaluator ev(field, signal, tiers, set);
    const auto tau = member_taus(set, scenario.fractions);
    const std::uint32_t subsets = 1U << set.size();
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      log.rates[t].push_back(reported_rate(ev.sir(PhaseSubset{mask}), mapping));
      log.probabilities[t].push_back(subset_probability(tau, PhaseSubset{mask}));
    }
  });
  return log;
}

std::vector<SweepTable> delay_sweep(const ExperimentConfig& config,
                                    std::span<const RateMapping> mappings,
                                    std::span<const double> delay_means, std::size_t trials,
                                    std::uint64_t seed) {
  const std::size_t K = config.network.tiers.size();
  std::vector<Scenario> scenarios;
  scenarios.push_back(scenario(0, config.network.policy, TimeFractions::uniform(1.0, K)));
  for (double d : delay_means) {
    scenarios.push_back(scenario(config.network.num_coordinated, config.network.policy,
                                 fractions_for(with_delay(config, d))));
  }
  const auto batch = evaluate_batch(config, scenarios, mappings, trials, seed);

  std::vector<SweepTable> tables;
  for (std::size_t m = 0; m < mappings.size(); ++m) {
    SweepTable table{metric_for(mappings[m]), {}};
    for (std::size_t i = 0; i < delay_means.size(); ++i) {
      table.rows.push_back({delay_means[i], batch.summary[i + 1][m], batch.summary[0][m]});
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

std::vector<SweepTable> l_sweep(const ExperimentConfig& config,
                                std::span<const RateMapping> mappings,
                                std::span<const int> l_values, std::size_t trials,
                                std::uint64_t seed) {
  const TimeFractions tau = fractions_for(with_delay(config, config.sweep.l_sweep_delay_mean));
  std::vector<Scenario> scenarios;
  for (int L : l_values) scenarios.push_back(scenario(L, config.network.policy, tau));
  const auto batch = evaluate_batch(config, scenarios, mappings, trials, seed);

  std::vector<SweepTable> tables;
  for (std::size_t m = 0; m < mappings.size(); ++m) {
    SweepTable table{metric_for(mappings[m]), {}};
    for (std::size_t i = 0; i < l_values.size(); ++i) {
      table.rows.push_back({static_cast<double>(l_values[i]), batch.summary[i][m], std::nullopt});
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

std::vector<LossTable> intratier_loss(const ExperimentConfig& config,
                                      std::span<const RateMapping> mappings, LossAxis axis,
                                      std::span<const double> axis_values, std::size_t trials,
                                      std::uint64_t seed) {
  std::vector<Scenario> scenarios;
  const TimeFractions l_tau =
      fractions_for(with_delay(config, config.sweep.l_sweep_delay_mean));
  for (double v : axis_values) {
    int L = config.network.num_coordinated;
    TimeFractions tau = l_tau;
    if (axis == LossAxis::DelaySweep) {
      tau = fractions_for(with_delay(config, v));
    } else {
      L = static_cast<int>(std::lround(v));
    }
    scenarios.push_back(scenario(L, CoordinationPolicy::CrossTier, tau));
    scenarios.push_back(scenario(L, CoordinationPolicy::IntraTier, tau));
  }
  const auto batch = evaluate_batch(config, scenarios, mappings, trials, seed, true);

  std::vector<LossTable> tables;
  for (std::size_t m = 0; m < mappings.size(); ++m) {
    LossTable table{metric_for(mappings[m]), axis, {}};
    for (std::size_t i = 0; i < axis_values.size(); ++i) {
      LossRow row;
      row.axis = axis_values[i];
      row.cross = batch.summary[2 * i][m];
      row.intra = batch.summary[2 * i + 1][m];
      const auto& c = batch.per_trial[2 * i][m];
      const auto& a = batch.per_trial[2 * i + 1][m];
      const double cm = row.cross.mean, am = row.intra.mean;
      if (cm > 0.0) {
        const double r = am / cm;
        row.loss = 1.0 - r;
        // Delta method on the paired ratio of means.
        double acc = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
          const double u = (a[t] - am) - r * (c[t] - cm);
          acc += u * u;
        }
        const double n = static_cast<double>(trials);
        row.loss_std_error = trials > 1 ? std::sqrt(acc / (n - 1.0) / n) / cm : 0.0;
      }
      table.rows.push_back(row);
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

std::vector<double> sir_samples(const ExperimentConfig& config, int num_coordinated,
                                CoordinationPolicy policy, std::size_t trials,
                                std::uint64_t seed) {
  const auto& tiers = config.network.tiers;
  std::vector<double> out(trials);
  parallel_for(trials, [&](std::size_t t) {
    const TrialSample sample = sample_trial(config.network, seed, t);
    const ReceivedField field = received_field(sample.realization, tiers, sample.fading.field_gains);
    const CoordinationSet set = select_coordination_set(sample.realization, tiers,
                                                        num_coordinated, policy,
                                                        sample.serving_tier);
    const SirEvaluator ev(field, serving_signal(sample, tiers, num_coordinated), tiers, set);
    out[t] = ev.sir(PhaseSubset::full(set.size()));
  });
  return out;
}

std::vector<BoundsRow> bounds_validation(const ExperimentConfig& config, std::size_t trials,
                                         std::uint64_t seed) {
  const auto& net = config.network;
  const auto& tiers = net.tiers;
  const bool single = tiers.size() == 1;
  if (!single && !net.serving_tier) {
    throw ConfigError("bounds validation of a multi-tier network needs serving_tier");
  }
  const std::size_t ks = net.serving_tier.value_or(0);
  const int L = net.num_coordinated;
  const TierConfig& serving = tiers[ks];

  const auto sir = sir_samples(config, L, net.policy, trials, seed);

  // rho of every tier that may hold coordinated BSs.
  double rho_min = 1.0;
  if (L > 0) {
    for (std::size_t k = 0; k < tiers.size(); ++k) {
      if (net.policy == CoordinationPolicy::IntraTier && k != ks) continue;
      rho_min = std::min(rho_min, rho_factor(true, tiers[k].feedback_bits, tiers[k].antennas));
    }
  }

  InterferenceSamples field;
  if (single) field = interference_samples(config, L, rho_min, 0, trials, seed);

  std::vector<BoundsRow> rows;
  const double n = static_cast<double>(trials);
  for (double db : config.sweep.beta_db) {
    const double beta = db_to_linear(db);
    BoundsRow row;
    row.beta = beta;
    const auto below = std::count_if(sir.begin(), sir.end(), [&](double g) { return g <= beta; });
    row.empirical_cdf = static_cast<double>(below) / n;
    row.empirical_se = std::sqrt(row.empirical_cdf * (1.0 - row.empirical_cdf) / n);

    BoundQuery q = single ? BoundQuery::one_tier(beta, serving.antennas, L, L, rho_min)
                          : BoundQuery{beta, L, rho_min, serving.antennas, L, {}};
    row.upper_bound = single ? ub_cdf_1tier(q, serving.pathloss).probability
                             : ub_cdf_ktier(q, tiers, ks).probability;
    try {
      row.lower_bound = single ? lb_cdf_1tier(q, serving.pathloss) : lb_cdf_ktier(q, tiers, ks);
    } catch (const DomainFault& e) {
      row.lower_bound = e.reason();
    }

    if (single) {
      const double alpha = serving.pathloss;
      const double x = beta * std::pow(std::numbers::pi * serving.density, 0.5 * alpha);
      const double c = dominance_constant(L, alpha, rho_min);
      const auto lhs = std::count_if(field.coordinated.begin(), field.coordinated.end(),
                                     [&](double v) { return v > x; });
      const auto rhs = std::count_if(field.removed[0].begin(), field.removed[0].end(),
                                     [&](double v) { return c * v > x; });
      row.dominance_lhs = static_cast<double>(lhs) / n;
      row.dominance_rhs = static_cast<double>(rhs) / n;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

InterferenceSamples interference_samples(const ExperimentConfig& config, int subset_size,
                                         double rho, std::size_t max_removed,
                                         std::size_t trials, std::uint64_t seed) {
  const auto& net = config.network;
  if (net.tiers.size() != 1) throw ConfigError("interference samples need a single-tier network");
  const auto need = static_cast<std::size_t>(std::max(subset_size + 1, 1));
  if (need > static_cast<std::size_t>(net.truncation_points_per_tier) ||
      max_removed >= static_cast<std::size_t>(net.truncation_points_per_tier)) {
    throw InsufficientCandidates("too few sampled points for the requested interference fields");
  }
  const auto& tiers = net.tiers;
  InterferenceSamples out;
  out.coordinated.resize(trials);
  out.removed.assign(max_removed + 1, std::vector<double>(trials));
  parallel_for(trials, [&](std::size_t t) {
    const TrialSample sample = sample_trial(net, seed, t);
    const auto& d = sample.realization.sq_distances.front();
    const auto& g = sample.fading.field_gains.front();
    const double half_alpha = -0.5 * tiers.front().pathloss;
    double coordinated = sample.realization.tail_mean.front();
    for (std::size_t i = 1; i < d.size(); ++i) {
      const double p = g[i] * std::pow(d[i], half_alpha);
      coordinated += (i <= static_cast<std::size_t>(subset_size) ? rho : 1.0) * p;
    }
    out.coordinated[t] = coordinated;
    GainDraw gains;
    gains.interferer_gains = sample.fading.field_gains;
    for (std::size_t m = 0; m <= max_removed; ++m) {
      out.removed[m][t] = interference_removed_m(sample.realization, tiers, gains, m);
    }
  });
  return out;
}

}  // namespace hetcomp
