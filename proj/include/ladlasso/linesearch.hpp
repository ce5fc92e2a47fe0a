#pragma once

#include <algorithm>
#include <iterator>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ladlasso/error.hpp"
#include "ladlasso/piecewise.hpp"

namespace ladlasso {

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double t) const { return lo <= t && t <= hi; }
};

inline void check_bracket(const Bracket& b) {
  if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi))
    throw InvalidInput("bracket must satisfy lo < hi with finite ends");
}

struct SearchConfig {
  double tolerance = 1e-8;  // final bracket width as a fraction of the initial width
  std::size_t max_iterations = 200;
  std::size_t probes = 8;  // quadrature only
  // Assume g is piecewise linear and stop as soon as two secants taken on either side of the
  // minimum meet at a point where g attains the secant value (see detail::secant_vertex).
  bool piecewise_linear_exit = false;
};

inline void check_config(const SearchConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw InvalidInput("search tolerance must be > 0");
  if (cfg.probes < 3) throw InvalidInput("quadrature search needs at least 3 probes");
}

struct SearchResult {
  double t = 0.0;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = true;
};

namespace detail {

// Minimising set of the sum of w_k |t - t_k| over `pts`, which is sorted and merged in place.
// The right slope at the k-th distinct location is 2 * (weight up to k) - total.
inline Bracket minimising_set(std::vector<Breakpoint>& pts) {
  if (pts.empty()) throw DegenerateInput("piecewise-linear function has no breakpoints");
  std::sort(pts.begin(), pts.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.location < b.location; });
  std::size_t n = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (n > 0 && pts[n - 1].location == pts[k].location)
      pts[n - 1].weight += pts[k].weight;
    else
      pts[n++] = pts[k];
  }
  pts.resize(n);

  double total = 0.0;
  for (const auto& p : pts) total += p.weight;
  if (!(total > 0.0)) throw DegenerateInput("piecewise-linear function has zero total weight");

  const double flat_eps = 64.0 * std::numeric_limits<double>::epsilon() * total;
  double upto = 0.0;
  std::size_t k = 0;
  for (; k < n; ++k) {
    upto += pts[k].weight;
    if (2.0 * upto - total >= -flat_eps) break;
  }
  k = std::min(k, n - 1);
  Bracket out{pts[k].location, pts[k].location};
  while (k + 1 < n && std::abs(2.0 * upto - total) <= flat_eps) {
    ++k;
    upto += pts[k].weight;
    out.hi = pts[k].location;
  }
  return out;
}

}  // namespace detail

// Minimising set [a, b] of g (a == b when the minimum is unique).
inline Bracket minimising_interval(const PiecewiseLinear1D& g) {
  std::vector<Breakpoint> pts = g.breakpoints;
  return detail::minimising_set(pts);
}

// Exact minimiser of a weighted sum of absolute values: the weighted median of the
// breakpoint locations. Flat minimising intervals resolve to their midpoint.
inline SearchResult weighted_median_min(const PiecewiseLinear1D& g) {
  const Bracket set = minimising_interval(g);
  SearchResult r;
  r.t = (set.lo == set.hi) ? set.lo : set.mid();
  r.value = g(r.t);
  r.evaluations = 1;
  return r;
}

namespace detail {

struct Probe {
  double t = 0.0;
  double v = 0.0;
};

// Intersection of the secant through (a, b) with the secant through (c, e), where
// a < b < c < e, the left secant falls and the right one rises. For convex g both secant
// extensions lie below g on [b, c], so if g equals the secant value at an intersection point
// strictly inside (b, c), convexity forces g >= that value everywhere and the point is a
// minimiser. The certificate degrades as the point approaches b or c (a rounding error in g
// is amplified by the inverse distance), hence the 1% margin.
inline std::optional<Probe> secant_vertex(Probe a, Probe b, Probe c, Probe e) {
  if (!(a.t < b.t && b.t < c.t && c.t < e.t)) return std::nullopt;
  const double s1 = (b.v - a.v) / (b.t - a.t);
  const double s2 = (e.v - c.v) / (e.t - c.t);
  if (!(s1 < 0.0 && s2 > 0.0)) return std::nullopt;
  const double t = (c.v - s2 * c.t - b.v + s1 * b.t) / (s1 - s2);
  const double margin = 0.01 * (c.t - b.t);
  if (!(t >= b.t + margin && t <= c.t - margin)) return std::nullopt;
  return Probe{t, b.v + s1 * (t - b.t)};
}

inline bool attains(double value, double predicted) {
  return value <= predicted + 1e-11 * std::max(1.0, std::abs(predicted));
}

}  // namespace detail

namespace detail {

// Probes closer than rounding noise are merged: a near-twin of the lowest probe would
// otherwise pose as its neighbour and pin the bracket to one side.
inline bool same_point(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

inline void insert_probe(std::vector<Probe>& pts, Probe p) {
  const auto it = std::lower_bound(pts.begin(), pts.end(), p.t, [](const Probe& q, double t) { return q.t < t; });
  if (it != pts.end() && same_point(it->t, p.t)) return;
  if (it != pts.begin() && same_point(std::prev(it)->t, p.t)) return;
  pts.insert(it, p);
}

inline std::size_t lowest(const std::vector<Probe>& pts) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].v < pts[k].v) k = i;
  return k;
}

// Secant vertex next to the lowest probe k, trying first the cell on the side of the lower
// neighbour. Only vertices predicting a value below probe k are useful.
inline std::optional<Probe> vertex_near(const std::vector<Probe>& pts, std::size_t k) {
  const std::size_t n = pts.size();
  std::optional<Probe> right, left;
  if (k >= 1 && k + 2 < n) right = secant_vertex(pts[k - 1], pts[k], pts[k + 1], pts[k + 2]);
  if (k >= 2 && k + 1 < n) left = secant_vertex(pts[k - 2], pts[k - 1], pts[k], pts[k + 1]);
  if (right && !(right->v < pts[k].v)) right.reset();
  if (left && !(left->v < pts[k].v)) left.reset();
  const bool prefer_right = k + 1 < n && (k == 0 || pts[k + 1].v <= pts[k - 1].v);
  if (prefer_right) return right ? right : left;
  return left ? left : right;
}

// Piecewise-linear mode shared by both searches. Every probe is kept; each round first tries
// the secant vertex around the lowest probe, then lays `interior` equally spaced probes over
// the cell pair around the lowest probe, so the bracket shrinks at least as fast as the plain
// grid round would.
template <class F>
SearchResult grid_search_pl(F&& g, Bracket bracket, const SearchConfig& cfg, std::size_t interior,
                            std::vector<Probe> known) {
  SearchResult r;
  std::vector<Probe> pts;
  for (const auto& p : known)
    if (bracket.contains(p.t)) insert_probe(pts, p);
  auto eval = [&](double t) {
    const Probe p{t, g(t)};
    ++r.evaluations;
    insert_probe(pts, p);
    return p;
  };
  for (double t : {bracket.lo, bracket.mid(), bracket.hi}) {
    const bool seen = std::any_of(pts.begin(), pts.end(), [t](const Probe& q) { return same_point(q.t, t); });
    if (!seen) eval(t);
  }
  const double target = cfg.tolerance * bracket.width();
  auto cell = [&](std::size_t k) {
    return Bracket{pts[k > 0 ? k - 1 : 0].t, pts[k + 1 < pts.size() ? k + 1 : k].t};
  };
  for (;;) {
    std::size_t k = lowest(pts);
    if (cell(k).width() <= target) break;
    if (r.iterations >= cfg.max_iterations) {
      r.converged = false;
      break;
    }
    ++r.iterations;
    if (auto c = vertex_near(pts, k)) {
      const Probe p = eval(c->t);
      if (attains(p.v, c->v)) return {p.t, p.v, r.iterations, r.evaluations, true};
      k = lowest(pts);
    }
    const Bracket b = cell(k);
    if (b.width() <= target) break;
    const double h = b.width() / static_cast<double>(interior + 1);
    for (std::size_t i = 1; i <= interior; ++i) eval(b.lo + static_cast<double>(i) * h);
  }
  const Probe best = pts[lowest(pts)];
  r.t = best.t;
  r.value = best.v;
  return r;
}

template <class F>
SearchResult ternary_search(F&& g, Bracket bracket, const SearchConfig& cfg, std::vector<Probe> known) {
  check_bracket(bracket);
  check_config(cfg);
  if (cfg.piecewise_linear_exit) return grid_search_pl(g, bracket, cfg, 2, std::move(known));
  const double target = cfg.tolerance * bracket.width();
  SearchResult r;
  double best_t = bracket.mid();
  double best_v = g(best_t);
  r.evaluations = 1;
  while (bracket.width() > target) {
    if (r.iterations >= cfg.max_iterations) {
      r.converged = false;
      break;
    }
    const double third = bracket.width() / 3.0;
    const double m1 = bracket.lo + third;
    const double m2 = bracket.hi - third;
    const double v1 = g(m1);
    const double v2 = g(m2);
    r.evaluations += 2;
    ++r.iterations;
    if (v1 < best_v) best_v = v1, best_t = m1;
    if (v2 < best_v) best_v = v2, best_t = m2;
    if (v1 < v2)
      bracket.hi = m2;
    else if (v1 > v2)
      bracket.lo = m1;
    else
      bracket = {m1, m2};
  }
  const double t = bracket.mid();
  const double v = g(t);
  ++r.evaluations;
  if (v <= best_v) {
    r.t = t;
    r.value = v;
  } else {
    r.t = best_t;
    r.value = best_v;
  }
  return r;
}

template <class F>
SearchResult quadrature_search(F&& g, Bracket bracket, const SearchConfig& cfg, std::vector<Probe> known) {
  check_bracket(bracket);
  check_config(cfg);
  const std::size_t p = cfg.probes;
  if (cfg.piecewise_linear_exit) return grid_search_pl(g, bracket, cfg, p, std::move(known));
  const double target = cfg.tolerance * bracket.width();
  SearchResult r;
  double best_t = bracket.mid();
  double best_v = g(best_t);
  r.evaluations = 1;
  std::vector<Probe> grid(p + 2);
  while (bracket.width() > target) {
    if (r.iterations >= cfg.max_iterations) {
      r.converged = false;
      break;
    }
    const double h = bracket.width() / static_cast<double>(p + 1);
    grid[0].t = bracket.lo;
    grid[p + 1].t = bracket.hi;
    std::size_t arg = 1;
    for (std::size_t k = 1; k <= p; ++k) {
      grid[k].t = bracket.lo + static_cast<double>(k) * h;
      grid[k].v = g(grid[k].t);
      if (grid[k].v < grid[arg].v) arg = k;
    }
    r.evaluations += p;
    ++r.iterations;
    if (grid[arg].v < best_v) best_v = grid[arg].v, best_t = grid[arg].t;
    bracket = {grid[arg - 1].t, grid[arg + 1].t};
  }
  const double t = bracket.mid();
  const double v = g(t);
  ++r.evaluations;
  if (v <= best_v) {
    r.t = t;
    r.value = v;
  } else {
    r.t = best_t;
    r.value = best_v;
  }
  return r;
}

// Grows `bracket` until its midpoint lies strictly below both endpoint values, which for a
// convex g places a minimiser inside. Each step extends the side with the lower endpoint
// value; equal endpoints with a flat middle extend both sides. `seen` collects every probe.
template <class F>
Bracket expand(F&& g, Bracket bracket, double growth, std::size_t max_doublings, std::vector<Probe>& seen) {
  check_bracket(bracket);
  if (!(growth > 1.0)) throw InvalidInput("bracket growth factor must be > 1");
  auto eval = [&](double t) {
    const double v = g(t);
    seen.push_back({t, v});
    return v;
  };
  double g_lo = eval(bracket.lo);
  double g_hi = eval(bracket.hi);
  for (std::size_t step = 0;; ++step) {
    const double g_mid = eval(bracket.mid());
    if (g_mid < g_lo && g_mid < g_hi) return bracket;
    if (step >= max_doublings)
      throw UnboundedDirection("no minimum found after " + std::to_string(max_doublings) + " bracket expansions");
    const double w = bracket.width();
    if (g_lo < g_hi) {
      bracket.lo = bracket.hi - growth * w;
      g_lo = eval(bracket.lo);
    } else if (g_hi < g_lo) {
      bracket.hi = bracket.lo + growth * w;
      g_hi = eval(bracket.hi);
    } else {
      const double extra = 0.5 * (growth - 1.0) * w;
      bracket = {bracket.lo - extra, bracket.hi + extra};
      g_lo = eval(bracket.lo);
      g_hi = eval(bracket.hi);
    }
  }
}

}  // namespace detail

// Classic two-probe ternary chop; the bracket shrinks to 2/3 per round.
template <class F>
SearchResult ternary_min(F&& g, Bracket bracket, const SearchConfig& cfg = {}) {
  return detail::ternary_search(g, bracket, cfg, {});
}

// Fixed-grid search: each round probes `cfg.probes` equally spaced interior points and keeps
// the two grid cells around the best one, so the bracket shrinks by 2/(probes+1). The control
// flow does not depend on the data beyond the final arg-min of each round.
template <class F>
SearchResult quadrature_min(F&& g, Bracket bracket, const SearchConfig& cfg = {}) {
  return detail::quadrature_search(g, bracket, cfg, {});
}

template <class F>
Bracket expand_bracket(F&& g, Bracket bracket, double growth = 2.0, std::size_t max_doublings = 60) {
  std::vector<detail::Probe> seen;
  return detail::expand(g, bracket, growth, max_doublings, seen);
}

}  // namespace ladlasso
