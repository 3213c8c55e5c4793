#include "hetcomp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "hetcomp/error.hpp"
#include "hetcomp/geometry.hpp"

namespace hetcomp {

namespace {

/// Gamma(i) / Gamma(i + a).
double gamma_ratio(std::size_t i, double a) {
  return boost::math::tgamma_delta_ratio(static_cast<double>(i), a);
}

struct SeriesSum {
  double value = 0.0;
  double remainder = 0.0;
  double tail_bound = 0.0;
  std::size_t explicit_terms = 0;
};

// sum_{i >= first} rho(i) Gamma(i) / Gamma(i + a), where rho(i) = 1 for
// every rank above last_special.
template <typename Rho>
SeriesSum ratio_series(std::size_t first, std::size_t last_special, double a, Rho rho,
                       const SeriesOptions& options) {
  SeriesSum out;
  std::size_t last = std::max(last_special, first + options.min_explicit_terms);
  if (last < first) last = first - 1;  // nothing explicit
  if (!options.analytic_remainder) {
    while (last + 1 - first < options.max_explicit_terms &&
           ratio_series_remainder(last + 1, a) > options.tolerance) {
      ++last;
    }
  }
  for (std::size_t i = first; i <= last; ++i) {
    out.value += rho(i) * gamma_ratio(i, a);
    ++out.explicit_terms;
  }
  const double rest = ratio_series_remainder(std::max(last + 1, first), a);
  if (options.analytic_remainder) {
    out.remainder = rest;
    out.value += rest;
  } else {
    out.tail_bound = rest;
  }
  return out;
}

double rho_at(const BoundQuery& q, std::size_t tier, std::size_t rank) {
  for (const auto& c : q.rho) {
    if (c.bs.tier == tier && c.bs.index + 1 == rank) return c.rho;
  }
  return 1.0;
}

std::size_t last_special_rank(const BoundQuery& q, std::size_t tier) {
  std::size_t last = 0;
  for (const auto& c : q.rho) {
    if (c.bs.tier == tier) last = std::max(last, c.bs.index + 1);
  }
  return last;
}

double inverse_serving_gain_mean(const BoundQuery& q) {
  const int dof = q.serving_antennas - q.num_coordinated - 1;
  if (dof < 1) {
    throw DomainFault("E[1/S_1] is infinite: serving antennas - L - 1 must be >= 1");
  }
  return 1.0 / dof;
}

// Gamma(1 - alpha/2) with the pole guard shared by both lower bounds.
double gamma_one_minus_half(double alpha) {
  const double a = 0.5 * alpha;
  if (a >= 1.0 && std::abs(a - std::round(a)) < 1e-12) {
    std::ostringstream msg;
    msg << "Gamma(1 - alpha/2) has a pole at alpha = " << alpha;
    throw DomainFault(msg.str());
  }
  return std::tgamma(1.0 - a);
}

double lower_bound_value(double prefactor, double alpha_eff, double bracket, double alpha_gamma) {
  if (!(bracket > 0.0)) {
    std::ostringstream msg;
    msg << "bracket (N - L) Gamma(1 - alpha/2) / (beta c) = " << bracket
        << " is not positive at alpha = " << alpha_gamma
        << "; its real power -2/alpha is undefined";
    throw DomainFault(msg.str());
  }
  const double exponent =
      prefactor * std::tgamma(1.0 + 2.0 / alpha_eff) * std::pow(bracket, -2.0 / alpha_eff);
  return std::clamp(1.0 - std::exp(-exponent), 0.0, 1.0);
}

}  // namespace

BoundQuery BoundQuery::one_tier(double threshold, int serving_antennas, int num_coordinated,
                                int subset_size, double rho) {
  BoundQuery q;
  q.threshold = threshold;
  q.serving_antennas = serving_antennas;
  q.num_coordinated = num_coordinated;
  q.subset_size = subset_size;
  q.rho_min = subset_size > 0 ? rho : 1.0;
  for (int j = 0; j < subset_size; ++j) {
    q.rho.push_back({BsId{0, static_cast<std::size_t>(j) + 1}, rho});
  }
  return q;
}

double distance_ratio_moment(std::size_t rank, double nu) {
  return std::tgamma(1.0 + nu) * gamma_ratio(rank, nu);
}

double expected_mth_distance(std::size_t m, double density) {
  return 1.0 / (std::sqrt(density * std::numbers::pi) * gamma_ratio(m, 0.5));
}

double dominance_constant(int subset_size, double pathloss, double rho_min) {
  return std::pow(3.0, -pathloss) * rho_min +
         std::pow(2.0 * subset_size + 3.0, -pathloss) * (1.0 - rho_min);
}

double ratio_series_remainder(std::size_t first_rank, double a) {
  return gamma_ratio(first_rank, a - 1.0) / (a - 1.0);
}

UpperBound ub_cdf_1tier(const BoundQuery& query, double pathloss, const SeriesOptions& options) {
  const double a = 0.5 * pathloss;
  const auto series = ratio_series(
      2, last_special_rank(query, 0), a,
      [&](std::size_t i) { return rho_at(query, 0, i); }, options);
  UpperBound ub;
  const double scale = query.threshold * inverse_serving_gain_mean(query) * std::tgamma(1.0 + a);
  ub.raw = scale * series.value;
  ub.remainder = scale * series.remainder;
  ub.tail_bound = scale * series.tail_bound;
  ub.explicit_terms = series.explicit_terms;
  ub.probability = std::min(1.0, ub.raw);
  return ub;
}

double lb_cdf_1tier(const BoundQuery& query, double pathloss) {
  const double g = gamma_one_minus_half(pathloss);
  const double c = dominance_constant(query.subset_size, pathloss, query.rho_min);
  const double bracket = (query.serving_antennas - query.num_coordinated) * g /
                         (query.threshold * c);
  return lower_bound_value(1.0, pathloss, bracket, pathloss);
}

UpperBound ub_cdf_ktier(const BoundQuery& query, std::span<const TierConfig> tiers,
                        std::size_t serving_tier, const SeriesOptions& options) {
  const TierConfig& s = tiers[serving_tier];
  const double a_s = 0.5 * s.pathloss;
  const double gamma_s = std::tgamma(1.0 + a_s);

  const auto own = ratio_series(
      2, last_special_rank(query, serving_tier), a_s,
      [&](std::size_t i) { return rho_at(query, serving_tier, i); }, options);
  double total = gamma_s * own.value;
  double remainder = gamma_s * own.remainder;
  double tail = gamma_s * own.tail_bound;
  std::size_t terms = own.explicit_terms;

  // log of (lambda_s pi)^(-a_s) to keep the cross-tier constant finite.
  const double log_serving_moment = -a_s * std::log(s.density * std::numbers::pi);
  for (std::size_t k = 0; k < tiers.size(); ++k) {
    if (k == serving_tier) continue;
    const TierConfig& t = tiers[k];
    const double a_k = 0.5 * t.pathloss;
    const double constant = (t.power / s.power) * gamma_s *
                            std::exp(log_serving_moment +
                                     a_k * std::log(t.density * std::numbers::pi));
    const auto cross = ratio_series(
        1, last_special_rank(query, k), a_k,
        [&](std::size_t i) { return rho_at(query, k, i); }, options);
    total += constant * cross.value;
    remainder += constant * cross.remainder;
    tail += constant * cross.tail_bound;
    terms += cross.explicit_terms;
  }

  const double scale = query.threshold * inverse_serving_gain_mean(query);
  UpperBound ub;
  ub.raw = scale * total;
  ub.remainder = scale * remainder;
  ub.tail_bound = scale * tail;
  ub.explicit_terms = terms;
  ub.probability = std::min(1.0, ub.raw);
  return ub;
}

double lb_cdf_ktier(const BoundQuery& query, std::span<const TierConfig> tiers,
                    std::size_t serving_tier) {
  const double alpha_s = tiers[serving_tier].pathloss;
  double alpha_max = 0.0;
  for (const auto& t : tiers) alpha_max = std::max(alpha_max, t.pathloss);
  const double g = gamma_one_minus_half(alpha_s);
  const double lambda_hat = equivalent_intensity(tiers, serving_tier);
  const double c = dominance_constant(query.subset_size, alpha_max, query.rho_min);
  const double bracket = (query.serving_antennas - query.num_coordinated) * g /
                         (query.threshold * c);
  const double prefactor = std::pow(std::numbers::pi * lambda_hat, 1.0 - alpha_s / alpha_max);
  return lower_bound_value(prefactor, alpha_max, bracket, alpha_s);
}

}  // namespace hetcomp
