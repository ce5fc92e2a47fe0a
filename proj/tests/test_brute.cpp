#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "ladlasso/brute.hpp"
#include "support.hpp"

using namespace ladlasso;
using testing_support::make_spec;
using testing_support::random_spec;

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(3, 1), 3u);
  EXPECT_EQ(binomial(6, 2), 15u);
  EXPECT_EQ(binomial(35, 5), 324632u);
  EXPECT_EQ(binomial(2, 3), 0u);
}

TEST(LinearSystem, Identity) {
  const auto v = solve_linear_system(Matrix::from_rows({{1, 0}, {0, 1}}), {3.0, 4.0});
  ASSERT_TRUE(v);
  EXPECT_EQ(*v, (Vector{3.0, 4.0}));
}

TEST(LinearSystem, RankDeficient) { EXPECT_FALSE(solve_linear_system(Matrix::from_rows({{1, 1}, {2, 2}}), {1.0, 2.0})); }

TEST(LinearSystem, RandomResidual) {
  Pcg32 rng(5);
  for (int k = 0; k < 50; ++k) {
    Matrix a(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = rng.normal() + (i == j ? 4.0 : 0.0);
    const Vector b{rng.normal(), rng.normal(), rng.normal()};
    const auto v = solve_linear_system(a, b);
    ASSERT_TRUE(v);
    for (std::size_t i = 0; i < 3; ++i) {
      double r = -b[i];
      for (std::size_t j = 0; j < 3; ++j) r += a(i, j) * (*v)[j];
      EXPECT_LT(std::abs(r), 1e-9);
    }
  }
}

TEST(LinearSystem, RejectsNonSquare) { EXPECT_THROW(solve_linear_system(Matrix(2, 3), Vector(2)), InvalidInput); }

TEST(Vertices, SinglePoint) {
  std::vector<Coefficients> seen;
  const auto stats = enumerate_vertices(make_spec({{1.0}}, {2.0}, 0.5), [&](const Coefficients& v) { seen.push_back(v); });
  EXPECT_EQ(seen, (std::vector<Coefficients>{{2.0}, {0.0}}));
  EXPECT_EQ(stats.candidates, 2u);
}

TEST(Vertices, CandidateCountIsBinomial) {
  const auto stats = enumerate_vertices(make_spec({{1.0}, {2.0}}, {1.0, 1.0}, 0.5), [](const Coefficients&) {});
  EXPECT_EQ(stats.candidates, 3u);
}

TEST(Vertices, RepeatedRowSkippedPerRankOracle) {
  const auto spec = make_spec({{1.0, 2.0}, {1.0, 2.0}, {-1.0, 0.5}, {3.0, 1.0}}, {1.0, 1.0, 2.0, -1.0}, 0.1);
  std::size_t visited = 0;
  const auto stats = enumerate_vertices(spec, [&](const Coefficients&) { ++visited; });
  EXPECT_EQ(stats.candidates, 15u);

  // independent count: a pair of hyperplanes meets in a point iff its 2x2 system has rank 2
  std::size_t full_rank = 0;
  auto plane = [&](std::size_t p) {
    Eigen::RowVector2d r;
    if (p < 4)
      r << spec.data.x()(p, 0), spec.data.x()(p, 1);
    else
      r << (p == 4 ? 1.0 : 0.0), (p == 5 ? 1.0 : 0.0);
    return r;
  };
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = a + 1; b < 6; ++b) {
      Eigen::Matrix2d m;
      m.row(0) = plane(a);
      m.row(1) = plane(b);
      if (Eigen::FullPivLU<Eigen::Matrix2d>(m).rank() == 2) ++full_rank;
    }
  EXPECT_EQ(visited, full_rank);
  EXPECT_EQ(stats.vertices(), full_rank);
  EXPECT_LT(stats.vertices(), 15u);
}

TEST(Brute, ExactFitBeatsZero) {
  const auto r = solve_brute(make_spec({{1.0}}, {2.0}, 0.5));
  EXPECT_EQ(r.beta, (Coefficients{2.0}));
  EXPECT_DOUBLE_EQ(r.objective, 1.0);
}

TEST(Brute, PenaltyOutweighsFit) {
  const auto r = solve_brute(make_spec({{1.0}}, {2.0}, 1.5));
  EXPECT_EQ(r.beta, (Coefficients{0.0}));
  EXPECT_DOUBLE_EQ(r.objective, 2.0);
}

TEST(Brute, LowerThanRandomSamples) {
  const auto spec = random_spec(31, 2, 6, 0.2);
  const auto r = solve_brute(spec);
  Pcg32 rng(31, 1);
  for (int k = 0; k < 10000; ++k)
    EXPECT_LE(r.objective, evaluate_objective(spec, Coefficients{rng.uniform(-20, 20), rng.uniform(-20, 20)}) + 1e-12);
}

TEST(Brute, LambdaFloorPicksSmallestNormOnFlatSegment) {
  // lambda at the floor: every beta in [0, 2] fits the two rows equally well
  const auto r = solve_brute(make_spec({{1.0}, {1.0}}, {0.0, 2.0}, 0.0));
  EXPECT_EQ(r.beta, (Coefficients{0.0}));
}

TEST(Brute, Caps) {
  BruteConfig cfg;
  cfg.max_d = 2;
  EXPECT_THROW(solve_brute(random_spec(1, 3, 5, 0.1), cfg), ProblemTooLarge);
  cfg = {};
  cfg.max_candidates = 10;
  EXPECT_THROW(solve_brute(random_spec(1, 2, 5, 0.1), cfg), ProblemTooLarge);
}

TEST(Brute, CountsCandidatesAndVertices) {
  const auto r = solve_brute(random_spec(2, 3, 10, 0.1));
  EXPECT_EQ(r.iterations, binomial(13, 3));
  EXPECT_LE(r.objective_evals, r.iterations);
}
