#include <gtest/gtest.h>

#include <numeric>

#include "tourncyc/normopt.hpp"

using namespace tourncyc;

TEST(MinimizeQnorm, UniformTwoPart) {
  const auto s = minimize_qnorm(3, 4, 0.25);
  EXPECT_EQ(s.m, 2);
  EXPECT_DOUBLE_EQ(s.z, 0.5);
  EXPECT_EQ(s.r, 0.0);
  EXPECT_NEAR(s.value, 0.125, 1e-15);
}

TEST(MinimizeQnorm, OnePartPlusRemainder) {
  const auto s = minimize_qnorm(3, 4, 0.5);
  EXPECT_EQ(s.m, 1);
  EXPECT_NEAR(s.z, (3.0 + std::sqrt(3.0)) / 6.0, 1e-12);
  EXPECT_NEAR(s.r, (3.0 - std::sqrt(3.0)) / 6.0, 1e-12);
  EXPECT_NEAR(s.value, 7.0 / 18.0, 1e-12);
}

TEST(MinimizeQnorm, StructuralInvariants) {
  for (auto [p, q] : {std::pair{3.0, 4.0}, {2.0, 3.0}, {2.5, 4.5}})
    for (int i = 1; i <= 40; ++i) {
      const double C = i / 40.0;
      const auto s = minimize_qnorm(p, q, C);
      EXPECT_NEAR(s.m * s.z + s.r, 1.0, 1e-15);
      EXPECT_GE(s.r, 0.0);
      EXPECT_LT(s.r, s.z + 1e-15);
      EXPECT_NEAR(s.m * std::pow(s.z, p) + std::pow(s.r, p), C, 1e-12);
      EXPECT_NEAR(s.value, f_pq(p, q, C), 1e-15);
    }
}

TEST(MinimizeQnorm, RejectsInfeasible) {
  EXPECT_THROW(minimize_qnorm(3, 4, 0.0), std::invalid_argument);
  EXPECT_THROW(minimize_qnorm(3, 4, 1.5), std::invalid_argument);
  EXPECT_THROW(minimize_qnorm(3, 3, 0.5), std::invalid_argument);
}

TEST(CappedMax, KnownCases) {
  auto c = maximize_p_capped(4, 3, 0.5);
  EXPECT_EQ(c.weights, (std::vector<double>{0.5, 0.5, 0, 0}));
  EXPECT_NEAR(c.value, 0.25, 1e-15);
  c = maximize_p_capped(3, 2, 0.4);
  EXPECT_NEAR(c.weights[2], 0.2, 1e-15);
  EXPECT_NEAR(c.value, 0.36, 1e-15);
  c = maximize_p_capped(2, 3, 0.9);
  EXPECT_NEAR(c.value, 0.730, 1e-12);
  EXPECT_THROW(maximize_p_capped(2, 3, 0.4), std::invalid_argument);
}

TEST(CappedMax, BeatsRandomFeasibleVectors) {
  auto rng = make_rng(3);
  for (auto [n, p, t] : {std::tuple{4u, 3, 0.3}, {5u, 2, 0.25}, {3u, 4, 0.5}}) {
    const double best = maximize_p_capped(n, p, t).value;
    for (int rep = 0; rep < 100000; ++rep) {
      std::vector<double> w(n);
      double sum = 0;
      for (auto& x : w) sum += x = -std::log(1.0 - uniform01(rng));
      for (auto& x : w) x /= sum;
      // Mix toward uniform until the cap holds.
      const double mx = *std::max_element(w.begin(), w.end()), u = 1.0 / n;
      if (mx > t) {
        const double mu = (mx - t) / (mx - u);
        for (auto& x : w) x = (1 - mu) * x + mu * u;
      }
      double v = 0;
      for (double x : w) v += std::pow(x, p);
      ASSERT_LE(v, best + 1e-12);
    }
  }
}

TEST(Oracle, MatchesStructuredSolution) {
  EXPECT_NEAR(oracle_min_qnorm(3, 4, 0.25, 4).value, 0.125, 1e-4);
  EXPECT_NEAR(oracle_min_qnorm(3, 5, 0.5, 3).value, f_pq(3, 5, 0.5), 1e-4);
  EXPECT_NEAR(oracle_min_qnorm(2, 3, 0.3, 5).value, minimize_qnorm(2, 3, 0.3).value, 1e-4);
}

TEST(Oracle, PointFeasibleSet) {
  EXPECT_EQ(oracle_min_qnorm(3, 4, 1.0, 1).value, 1.0);
  EXPECT_THROW(oracle_min_qnorm(3, 4, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(oracle_min_qnorm(3, 4, 0.05, 3), std::invalid_argument);
}

TEST(Oracle, OptimaHaveTwoValueStructure) {
  for (double C : {0.2, 0.35, 0.5, 0.8}) {
    const auto r = oracle_min_qnorm(3, 4, C, 5);
    EXPECT_LE(r.sum_residual, 1e-12);
    EXPECT_LE(r.power_residual, 1e-12);
    const auto cl = positive_clusters(r.vector, 1e-3);
    ASSERT_LE(cl.size(), 2u) << C;
    if (cl.size() == 2) EXPECT_EQ(cl[1].count, 1u) << C;
  }
}

TEST(Oracle, RestartsAgreeOnTheOptimiser) {
  OracleOptions a, b;
  a.seed = 1;
  b.seed = 99;
  b.structured_seeds = false;
  const auto x = oracle_min_qnorm(2.5, 4.5, 0.4, 4, a), y = oracle_min_qnorm(2.5, 4.5, 0.4, 4, b);
  for (std::size_t i = 0; i < x.vector.size(); ++i) EXPECT_NEAR(x.vector[i], y.vector[i], 1e-3);
}

TEST(Clusters, GroupsNearbyEntries) {
  const auto cl = positive_clusters({0.4, 0.4005, 0.2, 0.0, 1e-5}, 1e-3);
  ASSERT_EQ(cl.size(), 2u);
  EXPECT_EQ(cl[0].count, 2u);
  EXPECT_NEAR(cl[0].value, 0.40025, 1e-12);
  EXPECT_EQ(cl[1].count, 1u);
}

TEST(Vandermonde, FullRankCases) {
  EXPECT_TRUE(vandermonde_rank_check({1, 2, 3}, {0, 1, 2}));
  EXPECT_TRUE(vandermonde_rank_check({0.5, 1.5}, {1.3, 2.7}));
  EXPECT_THROW(vandermonde_rank_check({2, 1}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(vandermonde_rank_check({1, 2}, {1, 1}), std::invalid_argument);
}

TEST(Vandermonde, RandomInstancesHaveFullRank) {
  auto rng = make_rng(12);
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rep % 5);
    std::vector<double> c(n), s(n);
    double cc = 0, ss = -1;
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = cc += uniform(rng, 0.05, 1.0);
      s[i] = ss += uniform(rng, 0.2, 1.5);
    }
    ASSERT_TRUE(vandermonde_rank_check(c, s)) << rep;
  }
}

TEST(PowerSumBound, ExtremalPoints) {
  EXPECT_TRUE(two_level_bound_check({0.5}, 4));
  EXPECT_NEAR(std::pow(0.5, 4), g_ell(4, 0.125), 1e-16);
  EXPECT_TRUE(two_level_bound_check({0.25, 0.25}, 4));
  EXPECT_NEAR(2 * std::pow(0.25, 4), g_ell(4, 1.0 / 32.0), 1e-16);
  EXPECT_THROW(two_level_bound_check({0.3, 0.3}, 4), std::invalid_argument);
}

TEST(PowerSumBound, RandomPoints) {
  auto rng = make_rng(8);
  for (int rep = 0; rep < 100000; ++rep) {
    std::vector<double> x(1 + static_cast<std::size_t>(rep % 9));
    double sum = 0;
    for (auto& v : x) sum += v = -std::log(1.0 - uniform01(rng));
    for (auto& v : x) v *= 0.5 / sum;
    double s1 = std::accumulate(x.begin(), x.end(), 0.0);
    x[0] += 0.5 - s1;
    ASSERT_TRUE(two_level_bound_check(x, 4 + rep % 9)) << rep;
  }
}
