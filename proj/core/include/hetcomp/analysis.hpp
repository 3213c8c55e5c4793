#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hetcomp/association.hpp"
#include "hetcomp/model.hpp"

namespace hetcomp {

/// Cancellation factor of one coordinated BS in the bound formulas. Any BS
/// not listed has rho = 1.
struct CoordinatedRho {
  BsId bs;
  double rho = 1.0;
};

/// Inputs of the SIR CDF bounds for a cooperation subset B.
struct BoundQuery {
  double threshold = 1.0;  // beta, linear
  int subset_size = 0;     // l = |B|
  double rho_min = 1.0;    // min rho over B, 1 when B is empty
  int serving_antennas = 1;
  int num_coordinated = 0;
  std::vector<CoordinatedRho> rho;

  /// 1-tier query with B = {2nd .. (l+1)-th nearest}, every member at `rho`.
  static BoundQuery one_tier(double threshold, int serving_antennas, int num_coordinated,
                             int subset_size, double rho);
};

struct SeriesOptions {
  double tolerance = 1e-10;
  /// Explicit terms are summed at least up to this many ranks past the first.
  std::size_t min_explicit_terms = 0;
  std::size_t max_explicit_terms = 4096;
  /// Add the exact closed-form sum of the uncoordinated tail,
  /// sum_{i>=n} Gamma(i)/Gamma(i+a) = Gamma(n) / ((a-1) Gamma(n+a-1)).
  /// When false the series is cut where that tail drops below `tolerance`
  /// (or at max_explicit_terms) and the dropped tail is reported.
  bool analytic_remainder = true;
};

struct UpperBound {
  double probability = 1.0;  // min(1, bound)
  double raw = 0.0;          // before clamping
  double remainder = 0.0;    // part of the series added in closed form
  double tail_bound = 0.0;   // series mass neither summed nor added
  std::size_t explicit_terms = 0;
};

/// E[(Y_1 / Y_i)^nu] for the ordered points of a 1-D PPP:
/// Gamma(1 + nu) (i - 1)! / Gamma(i + nu). `rank` is 1-based.
double distance_ratio_moment(std::size_t rank, double nu);

/// E|X_m| = (lambda pi)^(-1/2) Gamma(m + 1/2) / (m - 1)!, `m` 1-based.
double expected_mth_distance(std::size_t m, double density);

/// 3^-alpha rho_min + (2 l + 3)^-alpha (1 - rho_min).
double dominance_constant(int subset_size, double pathloss, double rho_min);

/// sum_{i >= first_rank} Gamma(i) / Gamma(i + a), a > 1, in closed form.
double ratio_series_remainder(std::size_t first_rank, double a);

/// Markov upper bound on P(gamma_B <= beta) in a single-tier network.
UpperBound ub_cdf_1tier(const BoundQuery& query, double pathloss, const SeriesOptions& options = {});

/// Lower bound on P(gamma_B <= beta) in a single-tier network, evaluated
/// as written. Throws DomainFault where Gamma(1 - alpha/2) has a pole or the
/// bracket raised to -2/alpha is not positive.
double lb_cdf_1tier(const BoundQuery& query, double pathloss);

/// K-tier upper bound. Cross-tier terms use the ratio of moments
/// E|X_{1,k*}|^{alpha_k*} / E|X_{i,k}|^{alpha_k}.
UpperBound ub_cdf_ktier(const BoundQuery& query, std::span<const TierConfig> tiers,
                        std::size_t serving_tier, const SeriesOptions& options = {});

/// K-tier lower bound on the equivalent single-tier process (lambda_hat,
/// alpha_max). Same domain guard as lb_cdf_1tier.
double lb_cdf_ktier(const BoundQuery& query, std::span<const TierConfig> tiers,
                    std::size_t serving_tier);

}  // namespace hetcomp
