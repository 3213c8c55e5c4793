#include "hetcomp/overhead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hetcomp {

DelayModel DelayModel::erlang(int stages, double mean) {
  if (mean <= 0.0 || stages <= 0) return none();
  return {std::vector<double>(static_cast<std::size_t>(stages), stages / mean), 0.0};
}

double DelayModel::mean() const noexcept {
  double m = fixed_offset;
  for (double mu : stage_rates) m += 1.0 / mu;
  return m;
}

const DelayModel& OverheadConfig::delay_for(std::size_t tier) const {
  if (tier < tier_delay.size() && tier_delay[tier]) return *tier_delay[tier];
  return delay;
}

std::vector<Violation> validate(const CoherenceModel& model) {
  std::vector<Violation> out;
  if (!(model.mean_block > 0.0) || !std::isfinite(model.mean_block)) {
    out.push_back({"coherence.mean_block", "mean coherence time must be positive"});
  }
  if (model.shape && *model.shape < 1) {
    out.push_back({"coherence.shape", "gamma shape must be a positive integer"});
  }
  return out;
}

std::vector<Violation> validate(const DelayModel& model, const std::string& field) {
  std::vector<Violation> out;
  if (!(model.fixed_offset >= 0.0) || !std::isfinite(model.fixed_offset)) {
    out.push_back({field + ".fixed_offset", "fixed delay offset must be >= 0"});
  }
  for (double mu : model.stage_rates) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
      out.push_back({field + ".stage_rates", "stage rates must be positive and finite"});
      break;
    }
  }
  return out;
}

std::vector<Violation> validate(const OverheadConfig& config, std::size_t num_tiers) {
  auto out = validate(config.coherence);
  auto d = validate(config.delay);
  out.insert(out.end(), d.begin(), d.end());
  if (config.tier_delay.size() > num_tiers) {
    out.push_back({"tier_delay", "more per-tier delay overrides than tiers"});
  }
  for (std::size_t k = 0; k < config.tier_delay.size(); ++k) {
    if (!config.tier_delay[k]) continue;
    auto v = validate(*config.tier_delay[k], "tier_delay[" + std::to_string(k) + "]");
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

double sample_coherence(const CoherenceModel& model, Rng& rng) {
  if (model.is_deterministic()) return model.mean_block;
  const double shape = *model.shape;
  return std::gamma_distribution<double>(shape, model.mean_block / shape)(rng);
}

double sample_delay(const DelayModel& model, Rng& rng) {
  double d = model.fixed_offset;
  for (double mu : model.stage_rates) d += std::exponential_distribution<double>(mu)(rng);
  return d;
}

namespace {

// P(sum of exponential stages > x) by uniformization: with Lambda = max rate
// and P = I + S / Lambda, survival = sum_n Pois(n; Lambda x) * |e_0 P^n|.
double stages_survival(const std::vector<double>& rates, double x) {
  if (rates.empty()) return x >= 0.0 ? 0.0 : 1.0;
  if (x <= 0.0) return 1.0;
  const double lambda = *std::max_element(rates.begin(), rates.end());
  const double lx = lambda * x;
  const std::size_t J = rates.size();

  std::vector<double> v(J, 0.0), next(J, 0.0);
  v[0] = 1.0;
  const double log_lx = std::log(lx);
  double log_w = -lx;
  double survival = 0.0;
  double mass = 0.0;
  const auto n_max = static_cast<std::size_t>(lx + 40.0 * std::sqrt(lx) + 64.0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) log_w += log_lx - std::log(static_cast<double>(n));
    const double w = std::exp(log_w);
    double alive = 0.0;
    for (double p : v) alive += p;
    survival += w * alive;
    mass += w;
    if (alive < 1e-300 || (static_cast<double>(n) > lx && 1.0 - mass < 1e-17)) break;
    for (std::size_t j = 0; j < J; ++j) {
      const double move = rates[j] / lambda;
      next[j] = v[j] * (1.0 - move) + (j > 0 ? v[j - 1] * rates[j - 1] / lambda : 0.0);
    }
    v.swap(next);
  }
  return std::clamp(survival, 0.0, 1.0);
}

constexpr std::size_t kJointProbSamples = 250'000;  // binomial SE <= 0.5/sqrt(n) = 1e-3
constexpr std::size_t kLemmaSamples = 1'000'000;

}  // namespace

double delay_cdf(const DelayModel& model, double t) {
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = t - model.fixed_offset;
  if (x < 0.0) return 0.0;
  return 1.0 - stages_survival(model.stage_rates, x);
}

double delay_partial_mean(const DelayModel& model, double t) {
  const double c = model.fixed_offset;
  if (t <= c) return 0.0;
  const double ft = delay_cdf(model, t);
  if (model.stage_rates.empty()) return c;
  auto cdf = [&](double s) { return delay_cdf(model, s); };
  const double area =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(cdf, c, t, 15, 1e-13);
  return std::max(0.0, t * ft - area);
}

Estimate joint_prob(const CoherenceModel& coherence, const DelayModel& delay, double s,
                    std::uint64_t seed) {
  if (delay.is_zero()) return {s >= 0.0 ? 1.0 : 0.0, 0.0};
  if (coherence.is_deterministic()) {
    return {delay_cdf(delay, std::min(coherence.mean_block, s)), 0.0};
  }
  Rng rng = make_stream(seed, 0x6a6f696eULL);
  std::size_t hits = 0;
  for (std::size_t n = 0; n < kJointProbSamples; ++n) {
    const double T = sample_coherence(coherence, rng);
    const double D = sample_delay(delay, rng);
    if (D <= T && D <= s) ++hits;
  }
  const double p = static_cast<double>(hits) / kJointProbSamples;
  return {p, std::sqrt(p * (1.0 - p) / kJointProbSamples)};
}

TimeFraction time_fraction_lemma1(const CoherenceModel& coherence, const DelayModel& delay,
                                  std::uint64_t seed) {
  const double eta = coherence.change_rate();
  if (delay.is_zero()) return {1.0, 0.0, TimeFractionEstimator::Lemma1};
  if (coherence.is_deterministic()) {
    const double T = coherence.mean_block;
    const double tau = delay_cdf(delay, T) - eta * delay_partial_mean(delay, T);
    return {std::clamp(tau, 0.0, 1.0), 0.0, TimeFractionEstimator::Lemma1};
  }
  // E[1{D <= T} - eta D 1{D <= T}] from joint draws.
  Rng rng = make_stream(seed, 0x6c656d6dULL);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t n = 0; n < kLemmaSamples; ++n) {
    const double T = sample_coherence(coherence, rng);
    const double D = sample_delay(delay, rng);
    const double x = D <= T ? 1.0 - eta * D : 0.0;
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(kLemmaSamples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {std::clamp(mean, 0.0, 1.0), std::sqrt(var / n), TimeFractionEstimator::Lemma1};
}

TimeFraction time_fraction_renewal(const CoherenceModel& coherence, const DelayModel& delay,
                                   Rng& rng, std::size_t blocks) {
  double reward = 0.0, length = 0.0;
  double s_rr = 0.0, s_rl = 0.0, s_ll = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double T = sample_coherence(coherence, rng);
    const double D = sample_delay(delay, rng);
    const double r = std::max(T - D, 0.0);
    reward += r;
    length += T;
    s_rr += r * r;
    s_rl += r * T;
    s_ll += T * T;
  }
  const double n = static_cast<double>(blocks);
  const double tau = reward / length;
  // Delta-method standard error of a ratio estimator.
  const double mr = reward / n, ml = length / n;
  const double var_r = s_rr / n - mr * mr, var_l = s_ll / n - ml * ml, cov = s_rl / n - mr * ml;
  const double var = (var_r - 2.0 * tau * cov + tau * tau * var_l) / (ml * ml * n);
  return {tau, std::sqrt(std::max(0.0, var)), TimeFractionEstimator::RenewalOracle};
}

TimeFractions::TimeFractions(std::vector<double> per_tier, TimeFractionEstimator estimator)
    : per_tier_(std::move(per_tier)), estimator_(estimator) {}

TimeFractions TimeFractions::compute(const OverheadConfig& overhead, std::size_t num_tiers,
                                     TimeFractionEstimator estimator, std::uint64_t seed,
                                     std::size_t renewal_blocks) {
  std::vector<double> tau(num_tiers, 1.0);
  std::vector<const DelayModel*> done;
  for (std::size_t k = 0; k < num_tiers; ++k) {
    const DelayModel& delay = overhead.delay_for(k);
    auto same = std::find_if(done.begin(), done.end(),
                             [&](const DelayModel* d) { return *d == delay; });
    if (same != done.end()) {
      tau[k] = tau[static_cast<std::size_t>(same - done.begin())];
      done.push_back(&delay);
      continue;
    }
    if (estimator == TimeFractionEstimator::Lemma1) {
      tau[k] = time_fraction_lemma1(overhead.coherence, delay, stream_seed(seed, k)).value;
    } else {
      Rng rng = make_stream(seed, k);
      tau[k] = time_fraction_renewal(overhead.coherence, delay, rng, renewal_blocks).value;
    }
    done.push_back(&delay);
  }
  return TimeFractions(std::move(tau), estimator);
}

TimeFractions TimeFractions::uniform(double tau, std::size_t num_tiers) {
  return TimeFractions(std::vector<double>(num_tiers, tau), TimeFractionEstimator::Lemma1);
}

double subset_probability(std::span<const double> member_tau, PhaseSubset subset) {
  double p = 1.0;
  for (std::size_t j = 0; j < member_tau.size(); ++j) {
    p *= subset.contains(j) ? member_tau[j] : 1.0 - member_tau[j];
  }
  return p;
}

}  // namespace hetcomp
