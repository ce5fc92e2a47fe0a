#include <gtest/gtest.h>

#include "ladlasso/brute.hpp"
#include "ladlasso/ccd.hpp"
#include "ladlasso/io.hpp"
#include "support.hpp"

using namespace ladlasso;
using testing_support::make_spec;
using testing_support::random_spec;

TEST(Ccd, OneAxisEqualsWeightedMedian) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto spec = random_spec(seed, 1, 9, 0.3);
    const auto r = ccd_descend(spec, Coefficients{0.0});
    const auto exact = weighted_median_min(axis_restriction(spec, Coefficients{0.0}, 0));
    EXPECT_NEAR(r.objective, exact.value, 1e-12 * exact.value);
    EXPECT_TRUE(r.converged);
  }
}

TEST(Ccd, SeparableProblemMatchesBruteForce) {
  // one nonzero per row: each axis decouples into its own weighted median
  const auto spec = make_spec({{2.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, 3.0}, {1.0, 0.0, 0.0}, {0.0, 0.5, 0.0}},
                              {4.0, 1.0, -6.0, 1.0, 2.0}, 0.1);
  const auto r = ccd_descend(spec, Coefficients(3, 0.0));
  const auto b = solve_brute(spec);
  EXPECT_NEAR(r.objective, b.objective, 1e-12);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto exact = weighted_median_min(axis_restriction(spec, r.beta, j));
    EXPECT_NEAR(r.beta[j], exact.t, 1e-12);
  }
}

TEST(Ccd, StallsAtAxiswiseMinimumOnFixture) {
  const ProblemSpec spec(read_dataset_csv(std::string(LADLASSO_FIXTURES) + "/stall_m5_d2.csv"), 0.1);
  const auto r = ccd_descend(spec, Coefficients(2, 0.0));
  const auto b = solve_brute(spec);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(is_axiswise_minimum(spec, r.beta));
  EXPECT_GT(relative_gap(r.objective, b.objective), 1e-3);
}

TEST(Ccd, ObjectiveNeverIncreasesAndCountsNoViolations) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto spec = random_spec(seed, 1 + seed % 4, 4 + seed % 9, 0.1);
    const auto start = evaluate_objective(spec, Coefficients(spec.d(), 0.0));
    const auto r = ccd_descend(spec, Coefficients(spec.d(), 0.0));
    EXPECT_LE(r.objective, start);
    EXPECT_EQ(r.descent_violations, 0u);
  }
}

TEST(Ccd, FrozenAxisStaysPut) {
  const auto spec = random_spec(5, 3, 10, 0.1);
  CcdConfig cfg;
  cfg.frozen_axis = 1;
  const auto r = ccd_descend(spec, Coefficients{0.0, 2.5, 0.0}, cfg);
  EXPECT_DOUBLE_EQ(r.beta[1], 2.5);
  EXPECT_TRUE(is_axiswise_minimum(spec, r.beta, 1));
}

TEST(Ccd, BracketLineSearchesReachSameAxiswiseMinimum) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto spec = random_spec(seed, 1, 12, 0.2);
    const auto exact = ccd_descend(spec, Coefficients{0.0});
    for (auto kind : {LineSearchKind::ternary, LineSearchKind::quadrature}) {
      CcdConfig cfg;
      cfg.line_search = kind;
      const auto r = ccd_descend(spec, Coefficients{0.0}, cfg);
      EXPECT_NEAR(r.objective, exact.objective, 1e-6);
    }
  }
}

TEST(Ccd, InputValidation) {
  const auto spec = random_spec(1, 2, 5, 0.1);
  EXPECT_THROW(ccd_descend(spec, Coefficients{0.0}), InvalidInput);
  CcdConfig cfg;
  cfg.frozen_axis = 2;
  EXPECT_THROW(ccd_descend(spec, Coefficients{0.0, 0.0}, cfg), InvalidInput);
}

TEST(AxiswiseMinimum, OneAxisMedianIsMinimum) {
  const auto spec = random_spec(3, 1, 7, 0.2);
  const auto exact = weighted_median_min(axis_restriction(spec, Coefficients{0.0}, 0));
  EXPECT_TRUE(is_axiswise_minimum(spec, Coefficients{exact.t}));
}

TEST(AxiswiseMinimum, PerturbedPointIsNot) {
  const auto spec = random_spec(3, 1, 7, 0.2);
  const auto exact = weighted_median_min(axis_restriction(spec, Coefficients{0.0}, 0));
  const double tol = 1e-10 * (1.0 + std::abs(exact.t));
  EXPECT_FALSE(is_axiswise_minimum(spec, Coefficients{exact.t + 10.0 * tol + 1e-9}));
}

TEST(AxiswiseMinimum, EveryConvergedCcdResultQualifies) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto spec = random_spec(seed, 1 + seed % 4, 4 + seed % 9, 0.01 * static_cast<double>(seed % 7));
    const auto r = ccd_descend(spec, Coefficients(spec.d(), 0.0));
    if (r.converged) EXPECT_TRUE(is_axiswise_minimum(spec, r.beta)) << "seed " << seed;
  }
}

TEST(PerturbRestart, LandsOnAnotherAxiswiseMinimum) {
  const ProblemSpec spec(read_dataset_csv(std::string(LADLASSO_FIXTURES) + "/stall_m5_d2.csv"), 0.1);
  const auto stuck = ccd_descend(spec, Coefficients(2, 0.0));
  const auto r = perturb_restart(spec, stuck.beta, 0, 0.25);
  EXPECT_TRUE(is_axiswise_minimum(spec, r.beta));
}
