#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sharpmax/battery.hpp"
#include "sharpmax/rearrangement.hpp"

namespace sharpmax {
namespace {

std::shared_ptr<const Tree> binary(int depth) {
  return std::make_shared<const Tree>(build_tree(homogeneous_spec({0.5, 0.5}, depth)));
}

TreeFunction two_zero() { return TreeFunction(binary(1), {2.0, 0.0}); }

// Random nonincreasing step function with `n` pieces.
StepFunction1D random_step(Rng& rng, int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> v(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& x : w) total += (x = rng.uniform(0.01, 1.0));
  for (double& x : w) x /= total;
  for (double& x : v) x = rng.uniform(0.0, 10.0);
  std::sort(v.rbegin(), v.rend());
  return StepFunction1D(w, v);
}

TEST(Rearrange, Examples) {
  const auto star = rearrange(TreeFunction(binary(1), {0.0, 2.0}));
  ASSERT_EQ(star.pieces(), 2u);
  EXPECT_EQ(star(0.25), 2.0);
  EXPECT_EQ(star(0.5), 2.0);  // left-continuous
  EXPECT_EQ(star(0.75), 0.0);

  const auto t = binary(4);
  const auto c = rearrange(TreeFunction(t, std::vector<double>(t->leaf_count(), 1.5)));
  ASSERT_EQ(c.pieces(), 1u);
  EXPECT_EQ(c(0.1), 1.5);
  EXPECT_EQ(c(1.0), 1.5);
}

TEST(Rearrange, TiesMerge) {
  const auto star = rearrange(TreeFunction(binary(2), {1.0, 3.0, 1.0, 3.0}));
  ASSERT_EQ(star.pieces(), 2u);
  EXPECT_EQ(star.widths()[0], 0.5);
  EXPECT_TRUE(star.is_nonincreasing());
}

TEST(Rearrange, EquimeasurableAndPreservesIntegrals) {
  for (int i = 0; i < 60; ++i) {
    Rng rng(instance_seed(9, i));
    auto t = std::make_shared<const Tree>(
        random_tree(static_cast<BranchingProfile>(i % 3), 7, 400, rng));
    const TreeFunction phi = random_function(t, 10.0, rng);
    const StepFunction1D star = rearrange(phi);
    EXPECT_TRUE(star.is_nonincreasing());
    EXPECT_NEAR(star.integral(1.0), phi.integral(), 1e-13);
    EXPECT_NEAR(star.integral_p(1.0, 2.5), phi.moment(2.5), 1e-11);
    for (const double y : phi.values()) {
      double level = 0.0;
      for (std::size_t j = 0; j < t->leaf_count(); ++j) {
        if (phi.value(j) > y) level += t->leaf_measure(j);
      }
      EXPECT_NEAR(star.level_measure(y), level, 1e-14);
    }
    // The inf-formula evaluated pointwise.
    const std::vector<double> values(phi.values().begin(), phi.values().end());
    for (int j = 1; j <= 40; ++j) {
      const double s = (j - 0.5) / 40.0;
      EXPECT_EQ(star(s), oracle::rearrangement_at(*t, values, s)) << "t=" << s;
    }
  }
}

TEST(StepFunction, IntegralExamples) {
  const auto star = rearrange(two_zero());
  EXPECT_DOUBLE_EQ(star.integral(0.5), 1.0);
  EXPECT_DOUBLE_EQ(star.integral(1.0), 1.0);
  EXPECT_DOUBLE_EQ(star.integral(0.25), 0.5);
  EXPECT_DOUBLE_EQ(star.integral_p(0.5, 2.0), 2.0);
  EXPECT_THROW(star(0.0), std::domain_error);
  EXPECT_THROW(StepFunction1D({0.5, 0.4}, {1.0, 0.0}), std::invalid_argument);
}

TEST(HardyAverage, Examples) {
  const HardyAverage h(rearrange(two_zero()));
  EXPECT_DOUBLE_EQ(h(0.1), 2.0);
  EXPECT_DOUBLE_EQ(h(0.5), 2.0);
  EXPECT_DOUBLE_EQ(h(0.8), 1.0 / 0.8);
  EXPECT_DOUBLE_EQ(h(1.0), 1.0);
  EXPECT_THROW(h(0.0), std::domain_error);
  // 2 + integral of t^-2 over [1/2, 1].
  EXPECT_NEAR(h.integral_p(1.0, 2.0), 3.0, 1e-14);

  const HardyAverage c(StepFunction1D({1.0}, {4.0}));
  EXPECT_EQ(c(0.3), 4.0);
  EXPECT_EQ(c(1.0), 4.0);

  EXPECT_THROW(HardyAverage(StepFunction1D({0.5, 0.5}, {0.0, 1.0})),
               std::invalid_argument);
}

TEST(HardyAverage, PowerLawSample) {
  // Cell averages of g(t) = a f t^(a-1) keep the cumulative integral exact at
  // cell edges, so the running average there is f t^(a-1) = g(t) / a.
  const double a = 0.6;
  const double f = 1.3;
  const int n = 2000;
  std::vector<double> w(n, 1.0 / n);
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    v[i] = f * (std::pow(hi, a) - std::pow(lo, a)) * n;
  }
  const HardyAverage h(StepFunction1D(w, v));
  for (const int i : {1, 10, 100, 999, 2000}) {
    const double t = static_cast<double>(i) / n;
    EXPECT_NEAR(h(t) / (f * std::pow(t, a - 1.0)), 1.0, 1e-12) << "t=" << t;
  }
}

TEST(HardyAverage, DominatesAndDecreases) {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const StepFunction1D g = random_step(rng, 1 + i % 20);
    const HardyAverage h(g);
    double prev = INFINITY;
    for (int j = 1; j <= 400; ++j) {
      const double t = j / 400.0;
      EXPECT_GE(h(t), g(t) - 1e-12);
      EXPECT_LE(h(t), prev + 1e-12);
      prev = h(t);
    }
  }
}

TEST(IntegrateShiftedPower, MatchesSimpson) {
  for (const double e : {1.0, 2.0, 3.0, 1.5, 2.7, 0.5}) {
    for (const auto& [v, c] : {std::pair{1.0, 0.3}, std::pair{0.0, 2.0},
                               std::pair{2.0, 0.0}, std::pair{0.4, 1.7}}) {
      const double a = 0.2;
      const double b = 0.9;
      const double expected = oracle::simpson(
          [&](double t) { return std::pow(v + c / t, e); }, a, b, 20000);
      EXPECT_NEAR(integrate_shifted_power(v, c, a, b, e) / expected, 1.0, 1e-10)
          << "e=" << e << " v=" << v << " c=" << c;
    }
  }
  EXPECT_THROW(integrate_shifted_power(1.0, 1.0, 0.0, 1.0, 2.0), std::domain_error);
}

TEST(HardyAverage, IntegralMatchesSimpsonForNonIntegerP) {
  Rng rng(77);
  for (int i = 0; i < 10; ++i) {
    const StepFunction1D g = random_step(rng, 5);
    const HardyAverage h(g);
    const double k = rng.uniform(0.3, 1.0);
    const double p = 1.7;
    double expected = 0.0;
    // Integrate piecewise so that Simpson sees smooth integrands.
    const auto t = g.breakpoints();
    for (std::size_t j = 0; j + 1 < t.size() && t[j] < k; ++j) {
      const double right = std::min(k, t[j + 1]);
      expected += oracle::simpson(
          [&](double s) { return std::pow(s > 0.0 ? h(s) : g.values()[0], p); },
          t[j], right, 4000);
    }
    EXPECT_NEAR(h.integral_p(k, p) / expected, 1.0, 1e-8);
  }
}

TEST(HardyAverage, FubiniIdentity) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const StepFunction1D g = random_step(rng, 1 + i % 30);
    const HardyAverage h(g);
    const double p = i % 2 ? 2.0 : 1.0 + rng.uniform(0.2, 3.0);
    const double k = rng.uniform(0.05, 1.0);
    const double lhs = h.integral_p(k, p);
    const double b = g.integral(k);
    const double rhs = -std::pow(b, p) / ((p - 1.0) * std::pow(k, p - 1.0)) +
                       p / (p - 1.0) * h.integral_weighted(k, p - 1.0);
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-8) << "p=" << p << " k=" << k;
  }
}

TEST(CheckLemma31, Examples) {
  const auto r = check_lemma31(two_zero());
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.margin, 0.0, 1e-15);  // equality at t = 1
  const auto t = binary(3);
  const auto c = check_lemma31(TreeFunction(t, std::vector<double>(t->leaf_count(), 2.0)));
  EXPECT_TRUE(c.passed);
  EXPECT_EQ(c.margin, 0.0);
}

TEST(CheckLemma32, Examples) {
  const std::size_t first[] = {0};
  const auto r = check_lemma32(two_zero(), first, Exponent(2.0));
  EXPECT_TRUE(r.passed);
  EXPECT_DOUBLE_EQ(r.lhs, 2.0);
  EXPECT_DOUBLE_EQ(r.rhs, 2.0);

  const auto t = binary(3);
  std::vector<std::size_t> all(t->leaf_count());
  std::iota(all.begin(), all.end(), 0);
  const auto c = check_lemma32(TreeFunction(t, std::vector<double>(t->leaf_count(), 1.5)),
                               all, Exponent(3.0));
  EXPECT_TRUE(c.passed);
  EXPECT_NEAR(c.lhs, std::pow(1.5, 3), 1e-12);
  EXPECT_NEAR(c.rhs, std::pow(1.5, 3), 1e-12);

  EXPECT_THROW(check_lemma32(two_zero(), std::span<const std::size_t>{}, Exponent(2.0)),
               std::invalid_argument);
}

TEST(CheckCorollary21, Examples) {
  const auto r = check_corollary21(two_zero(), Exponent(2.0));
  EXPECT_TRUE(r.passed);
  EXPECT_DOUBLE_EQ(r.lhs, 2.5);
  EXPECT_NEAR(r.rhs, 3.0, 1e-14);

  const auto t = binary(2);
  const auto c = check_corollary21(TreeFunction(t, std::vector<double>(4, 2.0)), Exponent(1.5));
  EXPECT_TRUE(c.passed);
  EXPECT_NEAR(c.lhs, c.rhs, 1e-12);
}

TEST(CheckConditionsIToIII, Examples) {
  const auto t = binary(3);
  const TreeFunction c(t, std::vector<double>(t->leaf_count(), 2.0));
  for (const double k : {0.125, 0.3, 0.5, 1.0}) {
    const auto r = check_conditions_i_iii(c, k, Exponent(2.0));
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.details.at("i"), 0.0, 1e-12);
    EXPECT_NEAR(r.details.at("iii"), 0.0, 1e-12);
  }
  const auto r = check_conditions_i_iii(two_zero(), 0.5, Exponent(2.0));
  EXPECT_TRUE(r.passed);
  EXPECT_DOUBLE_EQ(r.lhs, 1.0);
  EXPECT_DOUBLE_EQ(r.rhs, 1.0);
  EXPECT_EQ(r.details.at("iii"), 0.0);
  EXPECT_THROW(check_conditions_i_iii(two_zero(), 0.0, Exponent(2.0)),
               std::invalid_argument);
}

TEST(Inequalities, SmallRandomBattery) {
  BatteryOptions options;
  options.seed = 1;
  options.trees = 60;
  options.max_depth = 8;
  options.k_sets_per_tree = 4;
  const BatteryResult result = run_battery(options);
  EXPECT_TRUE(result.all_passed());
  for (const auto& s : result.checks) EXPECT_EQ(s.passed, s.total) << s.check;
}

}  // namespace
}  // namespace sharpmax
