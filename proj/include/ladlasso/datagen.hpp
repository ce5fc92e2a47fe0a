#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ladlasso/error.hpp"
#include "ladlasso/model.hpp"
#include "ladlasso/pcg32.hpp"

namespace ladlasso {

struct GenSpec {
  std::size_t m = 30;
  std::size_t d = 1;
  std::optional<std::size_t> n_informative;  // default: all d columns
  std::optional<Coefficients> true_coefficients;
  double noise_sigma = 1.0;
  double outlier_fraction = 0.1;
  double outlier_scale = 10.0;
  std::uint64_t seed = 0;

  std::size_t informative() const { return n_informative.value_or(d); }
};

struct GeneratedData {
  Dataset data;
  Coefficients true_beta;
};

inline void validate(const GenSpec& g) {
  if (g.m < 1 || g.d < 1) throw InvalidInput("generator needs m >= 1 and d >= 1");
  if (g.informative() < 1 || g.informative() > g.d) throw InvalidInput("n_informative must lie in [1, d]");
  if (g.true_coefficients && g.true_coefficients->size() != g.d)
    throw InvalidInput("true_coefficients must have length d");
  if (!(g.noise_sigma >= 0.0) || !std::isfinite(g.noise_sigma)) throw InvalidInput("noise_sigma must be >= 0");
  if (!(g.outlier_fraction >= 0.0 && g.outlier_fraction < 1.0))
    throw InvalidInput("outlier_fraction must lie in [0, 1)");
  if (!(g.outlier_scale >= 1.0) || !std::isfinite(g.outlier_scale)) throw InvalidInput("outlier_scale must be >= 1");
}

// Draw order: x row-major (standard normal), then the informative coefficients (uniform in
// [1, 10] on the first n_informative axes) unless supplied, then the m noise terms, then the
// outlier rows by rejection sampling. y = x.beta + noise, with outlier rows' noise scaled.
inline GeneratedData generate(const GenSpec& g) {
  validate(g);
  Pcg32 rng(g.seed);
  Matrix x(g.m, g.d);
  for (std::size_t i = 0; i < g.m; ++i)
    for (std::size_t j = 0; j < g.d; ++j) x(i, j) = rng.normal();

  Coefficients beta(g.d, 0.0);
  if (g.true_coefficients) {
    beta = *g.true_coefficients;
  } else {
    for (std::size_t j = 0; j < g.informative(); ++j) beta[j] = rng.uniform(1.0, 10.0);
  }

  Vector noise(g.m);
  for (auto& e : noise) e = g.noise_sigma * rng.normal();

  const auto outliers = static_cast<std::size_t>(std::floor(g.outlier_fraction * static_cast<double>(g.m)));
  std::vector<bool> chosen(g.m, false);
  for (std::size_t picked = 0; picked < outliers;) {
    const std::uint32_t i = rng.bounded(static_cast<std::uint32_t>(g.m));
    if (chosen[i]) continue;
    chosen[i] = true;
    noise[i] *= g.outlier_scale;
    ++picked;
  }

  Vector y(g.m);
  for (std::size_t i = 0; i < g.m; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < g.d; ++j) v += x(i, j) * beta[j];
    y[i] = v + noise[i];
  }
  return {Dataset(std::move(x), std::move(y)), std::move(beta)};
}

}  // namespace ladlasso
