#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ladlasso/ccd.hpp"
#include "ladlasso/error.hpp"
#include "ladlasso/linesearch.hpp"
#include "ladlasso/model.hpp"

namespace ladlasso {

enum class OuterSearch { ternary, quadrature };

// How each outer probe is resolved. `ccd` runs one restricted CCD over all remaining axes.
// `recursive` applies the locus search again to the remaining axes until a single free axis
// is left, which avoids CCD stalling inside sub-spaces of two or more free axes.
enum class InnerStage { ccd, recursive };

struct LocusConfig {
  std::optional<std::size_t> outer_axis;  // default: column with the largest sum |x_ij|
  OuterSearch outer_search = OuterSearch::ternary;
  double outer_tolerance = 1e-8;  // relative to the (expanded) outer bracket width
  std::size_t outer_max_iterations = 200;
  std::size_t probes = 8;  // quadrature outer search only
  CcdConfig inner;
  InnerStage inner_stage = InnerStage::recursive;
  std::optional<Bracket> initial_bracket;  // outermost search only
};

struct LocusPoint {
  Coefficients beta;
  double value = 0.0;
  bool converged = true;
  std::size_t evaluations = 0;
  std::size_t descent_violations = 0;
};

struct LocusSample {
  double t = 0.0;
  Coefficients beta;
  double value = 0.0;
};

inline std::size_t choose_outer_axis(const ProblemSpec& spec) {
  const auto& x = spec.data.x();
  std::size_t best = 0;
  double best_mass = -1.0;
  for (std::size_t j = 0; j < spec.d(); ++j) {
    double mass = 0.0;
    for (std::size_t i = 0; i < spec.m(); ++i) mass += std::abs(x(i, j));
    if (mass > best_mass) {
      best_mass = mass;
      best = j;
    }
  }
  return best;
}

// [-R, R] with R = max|y| / max_j mean_i |x_ij|; expand_bracket fixes it up if too small.
inline Bracket default_outer_bracket(const ProblemSpec& spec) {
  const auto& x = spec.data.x();
  double y_max = 0.0;
  for (double v : spec.data.y()) y_max = std::max(y_max, std::abs(v));
  double col_mean = 0.0;
  for (std::size_t j = 0; j < spec.d(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < spec.m(); ++i) s += std::abs(x(i, j));
    col_mean = std::max(col_mean, s / static_cast<double>(spec.m()));
  }
  double r = (col_mean > 0.0) ? y_max / col_mean : 1.0;
  if (!(r > 0.0) || !std::isfinite(r)) r = 1.0;
  return {-r, r};
}

// The axis-wise minimum of the sub-space beta_axis = t, found by CCD with that axis frozen.
inline LocusPoint locus_value(const ProblemSpec& spec, std::size_t axis, double t, const CcdConfig& inner = {},
                              std::optional<std::span<const double>> warm = std::nullopt) {
  if (axis >= spec.d()) throw InvalidInput("locus axis out of range");
  Coefficients start(spec.d(), 0.0);
  if (warm) {
    check_coefficients(spec, *warm);
    start.assign(warm->begin(), warm->end());
  }
  start[axis] = t;
  CcdConfig cfg = inner;
  cfg.frozen_axis = axis;
  SolveResult r = ccd_descend(spec, start, cfg);
  return {std::move(r.beta), r.objective, r.converged, r.objective_evals, r.descent_violations};
}

namespace detail {

struct LocusRun {
  const ProblemSpec& spec;
  const LocusConfig& cfg;
  SolveResult& out;
  Bracket top;  // default outer bracket; inner searches inherit its absolute tolerance
  std::vector<double> shift;  // per axis: how far the last inner search moved its minimiser
  AxisScratch scratch;
  std::size_t probes = 0;
  std::size_t unconverged = 0;
};

inline std::size_t heaviest_axis(const ProblemSpec& spec, const std::vector<bool>& axes) {
  const auto& x = spec.data.x();
  std::size_t best = spec.d();
  double best_mass = -1.0;
  for (std::size_t j = 0; j < spec.d(); ++j) {
    if (!axes[j]) continue;
    double mass = 0.0;
    for (std::size_t i = 0; i < spec.m(); ++i) mass += std::abs(x(i, j));
    if (mass > best_mass) {
      best_mass = mass;
      best = j;
    }
  }
  return best;
}

inline double locus_search(LocusRun& run, Coefficients& beta, const std::vector<bool>& free_axes, std::size_t axis,
                           bool outermost, bool& converged);

// Minimises over the flagged axes with the rest of `beta` held fixed; returns f(beta).
inline double minimise_subspace(LocusRun& run, Coefficients& beta, const std::vector<bool>& free_axes,
                                bool& converged) {
  const auto count = static_cast<std::size_t>(std::count(free_axes.begin(), free_axes.end(), true));
  if (run.cfg.inner_stage == InnerStage::recursive && count >= 2)
    return locus_search(run, beta, free_axes, heaviest_axis(run.spec, free_axes), false, converged);
  if (count == 1 && run.cfg.inner.line_search == LineSearchKind::exact_median) {
    const auto j = static_cast<std::size_t>(std::find(free_axes.begin(), free_axes.end(), true) - free_axes.begin());
    run.out.objective_evals += 2;
    converged = true;
    return exact_axis_step(run.spec, beta, j, run.scratch);
  }
  SolveResult r;
  r.beta = std::move(beta);
  descend(run.spec, free_axes, run.cfg.inner, r);
  run.out.objective_evals += r.objective_evals;
  run.out.descent_violations += r.descent_violations;
  converged = r.converged;
  beta = std::move(r.beta);
  return evaluate_objective(run.spec, beta);
}

// 1-D search along `axis` over the locus of sub-space minima. Each probe is warm-started from
// the previous probe's point; `beta` receives the best point found.
inline double locus_search(LocusRun& run, Coefficients& beta, const std::vector<bool>& free_axes, std::size_t axis,
                           bool outermost, bool& converged) {
  std::vector<bool> rest = free_axes;
  rest[axis] = false;
  Coefficients warm = beta;
  Coefficients best = beta;
  double best_value = std::numeric_limits<double>::infinity();
  bool all_converged = true;

  auto locus = [&](double t) {
    Coefficients b = warm;
    b[axis] = t;
    bool ok = true;
    const double v = minimise_subspace(run, b, rest, ok);
    if (outermost) {
      ++run.probes;
      if (!ok) ++run.unconverged;
    }
    all_converged = all_converged && ok;
    if (v < best_value) {
      best_value = v;
      best = b;
    }
    warm = std::move(b);
    return v;
  };

  // inner searches start from a narrow bracket around the warm start: between neighbouring
  // outer probes their minimiser moves little
  Bracket initial = run.top;
  if (outermost && run.cfg.initial_bracket) {
    initial = *run.cfg.initial_bracket;
  } else if (!outermost) {
    const double half = std::max(2.0 * run.shift[axis], 1e3 * run.cfg.outer_tolerance * run.top.width());
    initial = {beta[axis] - half, beta[axis] + half};
  }
  std::vector<Probe> seen;
  const Bracket bracket = expand(locus, initial, 2.0, 60, seen);
  const double abs_tol = run.cfg.outer_tolerance * (outermost ? bracket.width() : run.top.width());
  // the configured search drives the outermost axis; nested levels always use ternary. The
  // outermost quadrature search keeps its fixed per-round work, so no secant-vertex probes.
  const bool quadrature = outermost && run.cfg.outer_search == OuterSearch::quadrature;
  SearchConfig search{std::min(1.0, abs_tol / bracket.width()), run.cfg.outer_max_iterations, run.cfg.probes,
                      !quadrature};
  const SearchResult s = quadrature ? quadrature_search(locus, bracket, search, std::move(seen))
                                    : ternary_search(locus, bracket, search, std::move(seen));
  if (outermost) run.out.iterations = s.iterations;
  if (!outermost) run.shift[axis] = std::abs(best[axis] - beta[axis]);
  converged = s.converged && (outermost || all_converged);
  beta = std::move(best);
  return best_value;
}

}  // namespace detail

// Two-stage search: a 1-D ternary or quadrature search along the outer axis over the locus
// of axis-wise minima, each probe resolved by the inner stage and warm-started from the
// previous probe. A plain CCD from zero seeds the warm start and is kept as the fallback
// answer, so the result is never worse than plain CCD.
inline SolveResult solve_locus(const ProblemSpec& spec, const LocusConfig& cfg = {}) {
  if (!(cfg.outer_tolerance > 0.0)) throw InvalidInput("outer tolerance must be > 0");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t axis = cfg.outer_axis.value_or(choose_outer_axis(spec));
  if (axis >= spec.d()) throw InvalidInput("outer axis out of range");

  CcdConfig plain = cfg.inner;
  plain.frozen_axis.reset();
  const SolveResult seed = ccd_descend(spec, Coefficients(spec.d(), 0.0), plain);

  SolveResult out;
  out.solver = (cfg.outer_search == OuterSearch::ternary) ? SolverId::locus_ternary : SolverId::locus_quadrature;
  out.objective_evals = seed.objective_evals;
  out.descent_violations = seed.descent_violations;

  const Bracket top = default_outer_bracket(spec);
  detail::LocusRun run{spec, cfg, out, top, std::vector<double>(spec.d(), 1e-3 * top.width())};
  Coefficients beta = seed.beta;
  bool outer_converged = true;
  const double value = detail::locus_search(run, beta, std::vector<bool>(spec.d(), true), axis, true, outer_converged);

  out.beta = (value < seed.objective) ? std::move(beta) : seed.beta;
  out.objective = evaluate_objective(spec, out.beta);
  out.converged = outer_converged && 10 * run.unconverged <= run.probes;
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// Evaluates the locus at n equally spaced points of `bracket`, warm-starting left to right.
inline std::vector<LocusSample> sample_locus(const ProblemSpec& spec, std::size_t axis, Bracket bracket, std::size_t n,
                                             const CcdConfig& inner = {}) {
  if (n < 3) throw InvalidInput("sample_locus needs n >= 3");
  check_bracket(bracket);
  if (axis >= spec.d()) throw InvalidInput("locus axis out of range");
  std::vector<LocusSample> out;
  out.reserve(n);
  std::optional<Coefficients> warm;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = bracket.lo + bracket.width() * static_cast<double>(k) / static_cast<double>(n - 1);
    LocusPoint p = warm ? locus_value(spec, axis, t, inner, std::span<const double>(*warm))
                        : locus_value(spec, axis, t, inner);
    warm = p.beta;
    out.push_back({t, std::move(p.beta), p.value});
  }
  return out;
}

}  // namespace ladlasso
