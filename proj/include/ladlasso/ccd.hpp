#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ladlasso/error.hpp"
#include "ladlasso/linesearch.hpp"
#include "ladlasso/model.hpp"

namespace ladlasso {

enum class LineSearchKind { exact_median, ternary, quadrature };

struct CcdConfig {
  LineSearchKind line_search = LineSearchKind::exact_median;
  double sweep_tolerance = 1e-10;  // stop once a full sweep improves f by less than this
  std::size_t max_sweeps = 500;
  std::optional<std::size_t> frozen_axis;
  SearchConfig search;  // ternary/quadrature line searches only
};

namespace detail {

inline double objective_from_residuals(std::span<const double> r, std::span<const double> beta, double lambda) {
  double fit = 0.0;
  for (double v : r) fit += std::abs(v);
  double l1 = 0.0;
  for (double b : beta) l1 += std::abs(b);
  return fit + lambda * l1;
}

inline bool descent_violated(double before, double after) {
  return after > before + 1e-12 * std::max(1.0, std::abs(before));
}

// Minimises one axis restriction. Bracket searches run over the hull of the breakpoints,
// which always contains the weighted median.
inline SearchResult minimise_axis(const PiecewiseLinear1D& g, const CcdConfig& cfg) {
  if (cfg.line_search == LineSearchKind::exact_median) return weighted_median_min(g);
  double lo = g.breakpoints.front().location;
  double hi = lo;
  for (const auto& b : g.breakpoints) {
    lo = std::min(lo, b.location);
    hi = std::max(hi, b.location);
  }
  if (!(lo < hi)) return SearchResult{lo, g(lo), 0, 1, true};
  if (cfg.line_search == LineSearchKind::ternary) return ternary_min(g, Bracket{lo, hi}, cfg.search);
  return quadrature_min(g, Bracket{lo, hi}, cfg.search);
}

// Descends over the axes flagged in `free_axes`, in ascending order, updating `out` in place
// (beta, iterations, objective_evals, descent_violations, converged).
inline void descend(const ProblemSpec& spec, const std::vector<bool>& free_axes, const CcdConfig& cfg,
                    SolveResult& out) {
  const auto& x = spec.data.x();
  const std::size_t m = spec.m();
  const std::size_t d = spec.d();
  const double lam = spec.lambda_eff();
  auto& beta = out.beta;
  Vector partial(m);
  out.converged = false;

  for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    Vector r = residuals(spec, beta);
    double f = objective_from_residuals(r, beta, lam);
    const double f_start = f;
    for (std::size_t j = 0; j < d; ++j) {
      if (!free_axes[j]) continue;
      for (std::size_t i = 0; i < m; ++i) partial[i] = r[i] + x(i, j) * beta[j];
      const PiecewiseLinear1D g = axis_restriction_from_partial(spec, partial, beta, j);
      const SearchResult s = minimise_axis(g, cfg);
      out.objective_evals += s.evaluations + 1;
      if (!(s.value < g(beta[j]))) continue;
      beta[j] = s.t;
      for (std::size_t i = 0; i < m; ++i) r[i] = partial[i] - x(i, j) * s.t;
      const double f_new = objective_from_residuals(r, beta, lam);
      if (descent_violated(f, f_new)) ++out.descent_violations;
      assert(!descent_violated(f, f_new));
      f = f_new;
    }
    ++out.iterations;
    if (f_start - f < cfg.sweep_tolerance) {
      out.converged = true;
      break;
    }
  }
}

struct AxisScratch {
  Vector partial;
  PiecewiseLinear1D g;
  std::vector<Breakpoint> sorted;
};

// One exact coordinate update of axis j, i.e. CCD over a single free axis, which converges in
// one step. Moves only on strict improvement; returns f(beta). Reuses `s` across calls.
inline double exact_axis_step(const ProblemSpec& spec, Coefficients& beta, std::size_t j, AxisScratch& s) {
  const auto& x = spec.data.x();
  const auto& y = spec.data.y();
  const std::size_t m = spec.m();
  const std::size_t d = spec.d();
  const double lam = spec.lambda_eff();
  s.partial.resize(m);
  s.g.breakpoints.clear();
  double constant = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double p = y[i];
    for (std::size_t k = 0; k < d; ++k)
      if (k != j) p -= x(i, k) * beta[k];
    s.partial[i] = p;
    const double a = x(i, j);
    if (a != 0.0)
      s.g.breakpoints.push_back({p / a, std::abs(a)});
    else
      constant += std::abs(p);
  }
  s.g.breakpoints.push_back({0.0, lam});
  for (std::size_t k = 0; k < d; ++k)
    if (k != j) constant += lam * std::abs(beta[k]);
  s.g.constant = constant;
  s.sorted.assign(s.g.breakpoints.begin(), s.g.breakpoints.end());
  const Bracket set = minimising_set(s.sorted);
  const double t = (set.lo == set.hi) ? set.lo : set.mid();
  const double now = s.g(beta[j]);
  const double v = s.g(t);
  if (!(v < now)) return now;
  beta[j] = t;
  return v;
}

}  // namespace detail

// Cyclical coordinate descent in ascending axis order. Each update minimises the objective
// along one axis with the others held fixed; moves are only taken when they strictly lower
// that axis restriction, so the objective sequence never increases.
inline SolveResult ccd_descend(const ProblemSpec& spec, std::span<const double> start, const CcdConfig& cfg = {}) {
  check_coefficients(spec, start);
  if (cfg.frozen_axis && *cfg.frozen_axis >= spec.d()) throw InvalidInput("frozen axis out of range");
  for (double v : start)
    if (!std::isfinite(v)) throw InvalidInput("non-finite start coefficient");

  const auto t0 = std::chrono::steady_clock::now();
  SolveResult out;
  out.solver = SolverId::ccd_plain;
  out.beta.assign(start.begin(), start.end());
  std::vector<bool> free_axes(spec.d(), true);
  if (cfg.frozen_axis) free_axes[*cfg.frozen_axis] = false;
  detail::descend(spec, free_axes, cfg, out);
  out.objective = evaluate_objective(spec, out.beta);
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// True when no axis-parallel move lowers f: for every axis except `skip`, beta_j lies in the
// minimising set of its axis restriction, widened by `slack` plus a rounding allowance.
inline bool is_axiswise_minimum(const ProblemSpec& spec, std::span<const double> beta,
                                std::optional<std::size_t> skip = std::nullopt, double slack = 0.0) {
  check_coefficients(spec, beta);
  for (std::size_t j = 0; j < spec.d(); ++j) {
    if (skip && *skip == j) continue;
    const Bracket set = minimising_interval(axis_restriction(spec, beta, j));
    const double allowance = slack + 1e-10 * (1.0 + std::abs(beta[j]));
    if (beta[j] < set.lo - allowance || beta[j] > set.hi + allowance) return false;
  }
  return true;
}

// Diagnostic only: nudge one coordinate of an axis-wise minimum and descend again, which
// lands on a neighbouring axis-wise minimum. Not used by the solvers.
inline SolveResult perturb_restart(const ProblemSpec& spec, std::span<const double> beta, std::size_t axis,
                                   double delta, const CcdConfig& cfg = {}) {
  check_coefficients(spec, beta);
  if (axis >= spec.d()) throw InvalidInput("axis index out of range");
  Coefficients start(beta.begin(), beta.end());
  start[axis] += delta;
  return ccd_descend(spec, start, cfg);
}

}  // namespace ladlasso
