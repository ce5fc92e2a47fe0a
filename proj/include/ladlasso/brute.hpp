#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ladlasso/error.hpp"
#include "ladlasso/model.hpp"

namespace ladlasso {

struct BruteConfig {
  std::size_t max_d = 6;
  std::uint64_t max_candidates = 2'000'000;
};

struct VertexStats {
  std::uint64_t candidates = 0;  // d-subsets of hyperplanes visited
  std::uint64_t singular = 0;    // of which had no unique intersection
  std::uint64_t vertices() const { return candidates - singular; }
};

// n choose k, saturating at uint64 max.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    if (r > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    r = r * num / i;  // exact: r * num is divisible by i at every step
  }
  return r;
}

// Gaussian elimination with partial pivoting. Returns nullopt when a pivot falls below
// 1e-12 times the largest magnitude in its (original) row.
inline std::optional<Vector> solve_linear_system(Matrix a, Vector b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw InvalidInput("solve_linear_system needs a square system");
  std::vector<double> scale(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale[i] = std::max(scale[i], std::abs(a(i, j)));

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(b[k], b[p]);
      std::swap(scale[k], scale[p]);
    }
    const double piv = a(k, k);
    if (!(std::abs(piv) >= 1e-12 * scale[k]) || scale[k] == 0.0) return std::nullopt;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = a(i, k) / piv;
      if (factor == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
      b[i] -= factor * b[k];
    }
  }
  Vector sol(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * sol[j];
    sol[k] = s / a(k, k);
  }
  return sol;
}

inline void check_brute_caps(const ProblemSpec& spec, const BruteConfig& cfg) {
  if (spec.d() > cfg.max_d)
    throw ProblemTooLarge("brute force supports d <= " + std::to_string(cfg.max_d) + ", got " +
                          std::to_string(spec.d()));
  const std::uint64_t count = binomial(spec.m() + spec.d(), spec.d());
  if (count > cfg.max_candidates)
    throw ProblemTooLarge("brute force would visit " + std::to_string(count) + " vertex candidates (cap " +
                          std::to_string(cfg.max_candidates) + ")");
}

// Visits every d-subset of the m + d hyperplanes {x_i.beta = y_i} and {beta_j = 0} in
// lexicographic order and calls `fn` with the intersection point of each nonsingular subset.
template <class Fn>
VertexStats enumerate_vertices(const ProblemSpec& spec, Fn&& fn, const BruteConfig& cfg = {}) {
  check_brute_caps(spec, cfg);
  const std::size_t d = spec.d();
  const std::size_t m = spec.m();
  const std::size_t planes = m + d;
  const auto& x = spec.data.x();
  const auto& y = spec.data.y();

  VertexStats stats;
  std::vector<std::size_t> pick(d);
  for (std::size_t k = 0; k < d; ++k) pick[k] = k;
  Matrix a(d, d);
  Vector b(d);
  while (true) {
    for (std::size_t r = 0; r < d; ++r) {
      const std::size_t plane = pick[r];
      if (plane < m) {
        for (std::size_t j = 0; j < d; ++j) a(r, j) = x(plane, j);
        b[r] = y[plane];
      } else {
        for (std::size_t j = 0; j < d; ++j) a(r, j) = (j == plane - m) ? 1.0 : 0.0;
        b[r] = 0.0;
      }
    }
    ++stats.candidates;
    if (auto v = solve_linear_system(a, b))
      fn(static_cast<const Coefficients&>(*v));
    else
      ++stats.singular;

    // next combination
    std::size_t k = d;
    while (k > 0 && pick[k - 1] == planes - d + (k - 1)) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t r = k; r < d; ++r) pick[r] = pick[r - 1] + 1;
  }
  return stats;
}

// Minimum-objective vertex. Ties (within 1e-12 relative) go to the smaller sum |beta_j|,
// then to the lexicographically smaller beta.
inline SolveResult solve_brute(const ProblemSpec& spec, const BruteConfig& cfg = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult out;
  out.solver = SolverId::brute;
  double best = std::numeric_limits<double>::infinity();
  double best_l1 = 0.0;
  auto l1 = [](const Coefficients& v) {
    double s = 0.0;
    for (double e : v) s += std::abs(e);
    return s;
  };
  const VertexStats stats = enumerate_vertices(
      spec,
      [&](const Coefficients& v) {
        const double f = evaluate_objective(spec, v);
        const double tie = 1e-12 * std::max(1.0, std::abs(best));
        bool take = false;
        if (out.beta.empty() || f < best - tie) {
          take = true;
        } else if (f <= best + tie) {
          const double n1 = l1(v);
          if (n1 < best_l1 - 1e-15 * std::max(1.0, best_l1))
            take = true;
          else if (n1 <= best_l1 + 1e-15 * std::max(1.0, best_l1))
            take = std::lexicographical_compare(v.begin(), v.end(), out.beta.begin(), out.beta.end());
        }
        if (take) {
          best = std::min(best, f);
          out.beta = v;
          best_l1 = l1(v);
        }
      },
      cfg);
  // every hyperplane set includes the coordinate planes, so beta = 0 is always a vertex
  if (out.beta.empty()) throw InternalError("vertex enumeration produced no candidates");
  out.objective = evaluate_objective(spec, out.beta);
  out.iterations = static_cast<std::size_t>(stats.candidates);
  out.objective_evals = static_cast<std::size_t>(stats.vertices());
  out.converged = true;
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace ladlasso
