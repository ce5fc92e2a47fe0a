#pragma once

#include <cstdint>
#include <vector>

#include "ladlasso/datagen.hpp"
#include "ladlasso/model.hpp"
#include "ladlasso/pcg32.hpp"

namespace testing_support {

inline ladlasso::ProblemSpec make_spec(const std::vector<std::vector<double>>& x, const ladlasso::Vector& y,
                                       double lambda) {
  return ladlasso::ProblemSpec(ladlasso::Dataset(ladlasso::Matrix::from_rows(x), y), lambda);
}

inline ladlasso::ProblemSpec random_spec(std::uint64_t seed, std::size_t d, std::size_t m, double lambda) {
  ladlasso::GenSpec g;
  g.d = d;
  g.m = m;
  g.seed = seed;
  return ladlasso::ProblemSpec(ladlasso::generate(g).data, lambda);
}

// A random convex piecewise-linear function with n breakpoints in [-10, 10].
inline ladlasso::PiecewiseLinear1D random_pl(ladlasso::Pcg32& rng, std::size_t n) {
  ladlasso::PiecewiseLinear1D g;
  for (std::size_t k = 0; k < n; ++k) g.breakpoints.push_back({rng.uniform(-10.0, 10.0), rng.uniform(0.1, 3.0)});
  g.constant = rng.uniform(0.0, 5.0);
  return g;
}

}  // namespace testing_support
