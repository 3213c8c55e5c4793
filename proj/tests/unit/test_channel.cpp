#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <hetcomp/analysis.hpp>
#include <hetcomp/channel.hpp>
#include <hetcomp/error.hpp>
#include <hetcomp/evaluate.hpp>

#include "testkit.hpp"

using namespace hetcomp;

namespace {

SpatialRealization realization(std::vector<std::vector<double>> sq) {
  SpatialRealization r;
  r.sq_distances = std::move(sq);
  r.tail_mean.assign(r.sq_distances.size(), 0.0);
  return r;
}

}  // namespace

TEST(Channel, RhoFactor) {
  EXPECT_DOUBLE_EQ(rho_factor(true, 3.0 * 7, 8), 0.125);
  EXPECT_DOUBLE_EQ(rho_factor(true, 3.0 * 3, 4), 0.125);
  EXPECT_DOUBLE_EQ(rho_factor(false, 21.0, 8), 1.0);
  EXPECT_DOUBLE_EQ(rho_factor(true, 0.0, 8), 1.0);
  EXPECT_EQ(rho_factor(true, std::numeric_limits<double>::infinity(), 4), 0.0);
  EXPECT_THROW(rho_factor(true, 3.0, 1), ConfigError);
  EXPECT_NO_THROW(rho_factor(false, 3.0, 1));
}

TEST(Channel, RhoMonotoneInBitsAndAntennas) {
  for (int n = 2; n < 10; ++n) {
    for (int b = 0; b < 20; ++b) {
      EXPECT_GT(rho_factor(true, b, n), rho_factor(true, b + 1, n));
      if (b > 0) EXPECT_LT(rho_factor(true, b, n), rho_factor(true, b, n + 1));
    }
  }
}

TEST(Channel, PhaseSubset) {
  EXPECT_EQ(PhaseSubset::full(0).mask, 0u);
  EXPECT_EQ(PhaseSubset::full(3).mask, 7u);
  EXPECT_EQ(PhaseSubset::full(3).size(), 3);
  EXPECT_TRUE(PhaseSubset{5}.contains(2));
  EXPECT_FALSE(PhaseSubset{5}.contains(1));
  EXPECT_EQ(PhaseSubset::none().size(), 0);
}

TEST(Channel, ServingGainMoments) {
  const auto r = realization({{1.0, 2.0}});
  Rng rng(1);
  const int N = 8;
  for (int L : {0, 1, 3}) {
    double s = 0.0, inv = 0.0;
    const std::size_t n = 400000;
    for (std::size_t t = 0; t < n; ++t) {
      const double g = gains_for(draw_fading(r, N, rng), L).serving_gain;
      ASSERT_GT(g, 0.0);
      s += g;
      inv += 1.0 / g;
    }
    EXPECT_NEAR(s / n, N - L, 0.01 * (N - L));
    EXPECT_NEAR(inv / n, 1.0 / (N - L - 1), 0.01 / (N - L - 1));
  }
}

TEST(Channel, LastDimensionLeavesOneExponential) {
  const auto r = realization({{1.0}});
  Rng rng(2);
  std::vector<double> g(100000), e(100000);
  for (std::size_t t = 0; t < g.size(); ++t) {
    const auto f = draw_fading(r, 4, rng);
    g[t] = gains_for(f, 3).serving_gain;
    EXPECT_EQ(g[t], f.serving_components[0]);
    e[t] = unit_exponential(rng);
  }
  EXPECT_LT(testkit::ks_distance(g, e), 0.01);
}

TEST(Channel, InterfererGainsUnitExponential) {
  const auto r = realization({std::vector<double>(1000, 1.0)});
  Rng rng(3);
  const auto f = draw_fading(r, 2, rng);
  double s = 0.0;
  for (double x : f.field_gains[0]) s += x;
  EXPECT_NEAR(s / 1000.0, 1.0, 0.1);
}

TEST(Channel, DirectArithmetic) {
  // Serving at 1 m, interferer at 2 m, alpha = 4, S1 = 2, S2 = 1.
  const std::vector<TierConfig> tiers{{1.0, 2, 4.0, 1e-5, 0.0}};
  const auto r = realization({{1.0, 4.0}});
  const auto set = select_coordination_set(r, tiers, 0, CoordinationPolicy::CrossTier, 0);
  GainDraw g{2.0, {{123.0, 1.0}}};
  EXPECT_DOUBLE_EQ(compute_sir(r, tiers, set, PhaseSubset::none(), g), 32.0);
}

TEST(Channel, PerfectCancellationRemovesMembers) {
  const std::vector<TierConfig> tiers{
      {1.0, 4, 4.0, 1e-5, std::numeric_limits<double>::infinity()}};
  const auto r = realization({{1.0, 4.0, 9.0}});
  const auto set = select_coordination_set(r, tiers, 2, CoordinationPolicy::CrossTier, 0);
  GainDraw g{1.0, {{1.0, 1.0, 1.0}}};
  EXPECT_TRUE(std::isinf(compute_sir(r, tiers, set, PhaseSubset::full(2), g)));
  EXPECT_TRUE(std::isfinite(compute_sir(r, tiers, set, PhaseSubset{1}, g)));
}

TEST(Channel, TailTermUsesEveryTier) {
  const std::vector<TierConfig> tiers{{2.0, 2, 4.0, 1e-5, 0.0}, {3.0, 2, 4.0, 1e-5, 0.0}};
  auto r = realization({{1.0}, {1e12}});
  r.tail_mean = {0.5, 0.25};
  const auto set = select_coordination_set(r, tiers, 0, CoordinationPolicy::CrossTier, 0);
  GainDraw g{1.0, {{1.0}, {0.0}}};
  EXPECT_DOUBLE_EQ(SirEvaluator(r, tiers, set, g).interference(PhaseSubset::none()),
                   2.0 * 0.5 + 3.0 * 0.25);
}

TEST(ChannelProperty, EvaluatorMatchesBruteForceAndIsMonotone) {
  testkit::Gen gen(99);
  for (int c = 0; c < 200; ++c) {
    NetworkConfig net = gen.network();
    net.num_coordinated = std::min(net.num_coordinated, 5);
    Rng rng(gen.integer(0, 1 << 30));
    auto r = sample_nearest(net, rng);
    extend_realization(r, net, rng);
    const auto ks = select_serving(r, net.tiers).tier;
    CoordinationSet set;
    try {
      set = select_coordination_set(r, net.tiers, net.num_coordinated, net.policy, ks);
    } catch (const InsufficientCandidates&) {
      continue;
    }
    const auto g = draw_gains(r, net.tiers, set, rng);
    const SirEvaluator ev(r, net.tiers, set, g);
    const std::uint32_t subsets = 1U << set.size();
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      // Brute force over every sampled point.
      double interference = 0.0;
      for (std::size_t k = 0; k < r.num_tiers(); ++k) {
        interference += net.tiers[k].power * r.tail_mean[k];
        for (std::size_t i = 0; i < r.sq_distances[k].size(); ++i) {
          if (k == ks && i == 0) continue;
          double rho = 1.0;
          for (std::size_t j = 0; j < set.size(); ++j) {
            if (set.members[j] == BsId{k, i}) {
              rho = rho_factor(PhaseSubset{mask}.contains(j), net.tiers[k].feedback_bits,
                               net.tiers[k].antennas);
            }
          }
          interference += net.tiers[k].power * rho * g.interferer_gains[k][i] *
                          std::pow(r.sq_distances[k][i], -0.5 * net.tiers[k].pathloss);
        }
      }
      const double signal = net.tiers[ks].power * g.serving_gain *
                            std::pow(r.sq_distances[ks][0], -0.5 * net.tiers[ks].pathloss);
      const double sir = ev.sir(PhaseSubset{mask});
      EXPECT_NEAR(sir, signal / interference, 1e-10 * sir);
      // Supersets never lower the SIR.
      for (std::size_t j = 0; j < set.size(); ++j) {
        EXPECT_GE(ev.sir(PhaseSubset{mask | (1U << j)}), sir);
      }
    }
  }
}

TEST(Channel, RemovedFieldsAreNested) {
  auto cfg = testkit::one_tier(4, 4.0, 1e-5, 0, 0.0);
  const auto samples = interference_samples(cfg, 0, 1.0, 3, 20000, 5);
  for (std::size_t t = 0; t < 20000; ++t) {
    for (std::size_t m = 1; m <= 3; ++m) EXPECT_LE(samples.removed[m][t], samples.removed[m - 1][t]);
  }
}

// P(I_(1) > x) >= P(3^-alpha I_(0) > x) holds through the bulk but not in the
// tail: I_(0) keeps the nearest point, so its tail decays like x^(-2/alpha)
// against x^(-4/alpha) for I_(1).
TEST(Channel, RemovedFieldDominanceHoldsInBulkOnly) {
  auto cfg = testkit::one_tier(4, 4.0, 1e-5, 0, 0.0);
  const std::size_t n = 50000;
  const auto samples = interference_samples(cfg, 0, 1.0, 1, n, 5);
  const double c = std::pow(3.0, -4.0);
  const double scale = std::pow(std::numbers::pi * 1e-5, 2.0);
  auto tails = [&](double q) {
    const double x = q * scale;
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      lhs += samples.removed[1][t] > x;
      rhs += c * samples.removed[0][t] > x;
    }
    return std::pair{lhs / n, rhs / n};
  };
  for (double q = 0.001; q <= 5.0; q *= 1.5) {
    const auto [lhs, rhs] = tails(q);
    EXPECT_GE(lhs, rhs - 3.0 * std::sqrt(rhs * (1.0 - rhs) / n) - 1e-12) << q;
  }
  for (double q : {200.0, 1000.0}) {
    const auto [lhs, rhs] = tails(q);
    EXPECT_LT(lhs, rhs) << q;
  }
}

TEST(Channel, NormalizedInterferenceMeanMatchesSeries) {
  // E[|X_1|^alpha I / S_1] with unit gains = sum_{i=2}^n Gamma(1+a)(i-1)!/Gamma(i+a).
  const int pts = 200;
  auto cfg = testkit::one_tier(4, 4.0, 1e-5, 0, 0.0);
  cfg.network.truncation_points_per_tier = pts;
  cfg.network.tail_compensation = false;
  const std::size_t n = 100000;
  double sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const auto s = sample_trial(cfg.network, 41, t);
    const auto& d = s.realization.sq_distances[0];
    double i_sum = 0.0;
    for (std::size_t i = 1; i < d.size(); ++i) i_sum += s.fading.field_gains[0][i] * std::pow(d[0] / d[i], 2.0);
    sum += i_sum;
  }
  double series = 0.0;
  for (int i = 2; i <= pts; ++i) series += distance_ratio_moment(static_cast<std::size_t>(i), 2.0);
  EXPECT_NEAR(sum / n, series, 0.02 * series);
}
