#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sharpmax/battery.hpp"
#include "sharpmax/bellman.hpp"

namespace sharpmax {
namespace {

BellmanQuery query(double p, double f, double F, double k = 1.0) {
  return BellmanQuery(Exponent(p), f, F, k);
}

TEST(BellmanQuery, Admissibility) {
  EXPECT_THROW(query(2, 0.0, 1.0), std::domain_error);
  EXPECT_THROW(query(2, 2.0, 1.0), std::domain_error);  // f^p > F
  EXPECT_THROW(query(2, 1.0, 2.0, 0.0), std::domain_error);
  EXPECT_THROW(query(2, 1.0, 2.0, 1.5), std::domain_error);
  EXPECT_NO_THROW(query(2, 1.0, 1.0, 1.0));
}

TEST(BellmanTwoVar, Examples) {
  EXPECT_DOUBLE_EQ(bellman_two_var(query(2, 1, 1)), 1.0);
  EXPECT_NEAR(bellman_two_var(query(2, 1, 2)), 2.0 * std::pow(1.0 + std::sqrt(0.5), 2),
              1e-12);
  EXPECT_NEAR(bellman_two_var(query(2, 1, 2)), 5.8284271247461903, 1e-12);
  // Doob limit F q^p.
  EXPECT_NEAR(bellman_two_var(query(2, 1e-6, 1)), 4.0, 1e-5);
}

TEST(BellmanTwoVar, Homogeneity) {
  for (const double e : {1.5, 2.0, 3.0}) {
    for (const double c : {0.1, 3.0, 17.0}) {
      const double base = bellman_two_var(query(e, 1.0, 2.5));
      const double scaled = bellman_two_var(query(e, c, std::pow(c, e) * 2.5));
      EXPECT_NEAR(scaled / (std::pow(c, e) * base), 1.0, 1e-10);
    }
  }
}

TEST(HK, Examples) {
  const auto q = query(2, 1, 2, 0.5);
  EXPECT_NEAR(h_k(0.5, q), 1.0, 1e-15);  // B = kf gives f^p
  EXPECT_NEAR(h_k(0.0, q), 2.0, 1e-15);
  EXPECT_NEAR(h_k(0.25, q), 1.25, 1e-15);
  const auto q3 = query(3, 2, 20, 0.3);
  EXPECT_NEAR(h_k(0.6, q3), 8.0, 1e-12);
  EXPECT_THROW(h_k(0.5, query(2, 1, 2, 1.0)), std::domain_error);
  EXPECT_THROW(h_k(1.5, q), std::domain_error);
}

TEST(FeasibleInterval, Examples) {
  const auto a = feasible_interval(query(2, 1, 1.25, 0.5));
  EXPECT_NEAR(a.lo, 0.25, 1e-12);
  EXPECT_NEAR(a.hi, 0.75, 1e-12);

  const auto b = feasible_interval(query(2, 1, 1, 0.3));
  EXPECT_EQ(b.lo, 0.3);
  EXPECT_EQ(b.hi, 0.3);

  const auto c = feasible_interval(query(2, 1, 2, 0.5));
  EXPECT_EQ(c.lo, 0.0);
  EXPECT_EQ(c.hi, 1.0);
}

TEST(FeasibleInterval, GeometryMatchesQuadraticRoots) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double f = rng.uniform(0.2, 3.0);
    const double F = f * f * rng.uniform(1.0, 4.0);
    const double k = rng.uniform(0.02, 0.98);
    const auto q = query(2, f, F, k);
    const auto got = feasible_interval(q);
    const auto [lo, hi] = oracle::feasible_p2(f, F, k);
    EXPECT_NEAR(got.lo, lo, 1e-10);
    EXPECT_NEAR(got.hi, hi, 1e-10);
    EXPECT_LE(0.0, got.lo);
    EXPECT_LE(got.lo, k * f);
    EXPECT_LE(k * f, got.hi);
    EXPECT_LE(got.hi, f);
    EXPECT_LE(h_k(got.lo, q), F + 1e-12);
    EXPECT_LE(h_k(got.hi, q), F + 1e-12);
    if (got.lo > 0.0) EXPECT_NEAR(h_k(got.lo, q), F, 1e-10 * F);
    if (got.hi < f) EXPECT_NEAR(h_k(got.hi, q), F, 1e-10 * F);
  }
}

TEST(ThreeVarObjective, Examples) {
  EXPECT_NEAR(three_var_objective(0.3, query(2, 1, 1, 0.3)), 0.3, 1e-12);
  EXPECT_NEAR(three_var_objective(1.0, query(2, 1, 2, 0.5)), 2.0, 1e-12);
  // A = 1.5, ratio 1/3, closed-form omega_2.
  EXPECT_NEAR(three_var_objective(0.5, query(2, 1, 2, 0.5)),
              1.5 * std::pow(1.0 + std::sqrt(2.0 / 3.0), 2), 1e-12);
  EXPECT_NEAR(three_var_objective(0.5, query(2, 1, 2, 0.5)), 4.9494897427831781, 1e-12);
}

TEST(ThreeVarObjective, BoundaryAndInfeasible) {
  // B = 0 with A > 0: omega_p(0) = q.
  const auto q = query(2, 1, 3, 0.5);
  EXPECT_NEAR(three_var_objective(0.0, q), (3.0 - 2.0) * 4.0, 1e-12);
  // h_k(0) = 2 = F: A = 0 at B = 0 is the degenerate zero objective.
  EXPECT_EQ(three_var_objective(0.0, query(2, 1, 2, 0.5)), 0.0);
  // Outside the feasible interval [0.25, 0.75].
  EXPECT_THROW(three_var_objective(0.9, query(2, 1, 1.25, 0.5)), std::domain_error);
  EXPECT_THROW(three_var_objective(0.1, query(2, 1, 1.25, 0.5)), std::domain_error);
}

TEST(BellmanThreeVar, Examples) {
  const auto constant = bellman_three_var(query(2, 1, 1, 0.3));
  EXPECT_NEAR(constant.value, 0.3, 1e-12);
  EXPECT_NEAR(constant.argmax_b, 0.3, 1e-12);

  const auto full = bellman_three_var(query(2, 1, 2, 1.0));
  EXPECT_NEAR(full.value, 5.8284271247461903, 1e-12);
  EXPECT_EQ(full.argmax_b, 1.0);

  // Frozen from a 50-digit root of the derivative of the closed-form p = 2
  // objective: maximum 3 sqrt(3) at B = (3 - sqrt(3)) / 2.
  const auto mid = bellman_three_var(query(2, 1, 2, 0.5));
  EXPECT_NEAR(mid.value, 3.0 * std::sqrt(3.0), 1e-10);
  EXPECT_NEAR(mid.argmax_b, (3.0 - std::sqrt(3.0)) / 2.0, 1e-5);
}

TEST(BellmanThreeVar, MatchesGridScanOracle) {
  Rng rng(2024);
  for (int i = 0; i < 20; ++i) {
    const double f = rng.uniform(0.3, 2.0);
    const double F = f * f * rng.uniform(1.01, 5.0);
    const double k = rng.uniform(0.05, 0.95);
    const auto [lo, hi] = oracle::feasible_p2(f, F, k);
    const double expected = oracle::grid_max(
        [&](double b) { return oracle::objective_p2(b, f, F, k); }, lo, hi, 200001);
    const double got = bellman_three_var(query(2, f, F, k)).value;
    EXPECT_GE(got, expected - 1e-9);
    EXPECT_NEAR(got, expected, 1e-6);
  }
}

TEST(BellmanThreeVar, BoundedByTwoVarAndMonotone) {
  for (const double e : {1.5, 2.0, 3.0}) {
    const double f = 1.0;
    const double F = 2.0;
    double prev = 0.0;
    for (int i = 1; i <= 20; ++i) {
      const double k = i / 20.0;
      const double v = bellman_three_var(query(e, f, F, k)).value;
      EXPECT_LE(v, bellman_two_var(query(e, f, F)) + 1e-9);
      EXPECT_GE(v, prev - 1e-9) << "p=" << e << " k=" << k;
      prev = v;
    }
    prev = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double Fi = 1.0 + 0.2 * i;
      const double v = bellman_three_var(query(e, f, Fi, 0.4)).value;
      EXPECT_GE(v, prev - 1e-9) << "p=" << e << " F=" << Fi;
      prev = v;
    }
  }
}

TEST(BellmanThreeVar, Homogeneity) {
  for (const double e : {1.5, 3.0}) {
    const double base = bellman_three_var(query(e, 1.0, 2.0, 0.35)).value;
    const double c = 2.5;
    const double scaled =
        bellman_three_var(query(e, c, std::pow(c, e) * 2.0, 0.35)).value;
    EXPECT_NEAR(scaled / (std::pow(c, e) * base), 1.0, 1e-9);
  }
}

}  // namespace
}  // namespace sharpmax
