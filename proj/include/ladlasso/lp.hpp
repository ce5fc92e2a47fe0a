#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ladlasso/error.hpp"
#include "ladlasso/model.hpp"

namespace ladlasso {

// min c'x  s.t.  A x = b, x >= 0, with columns laid out as [beta_p | beta_n | r_p | r_n].
// Row i reads x_i.(beta_p - beta_n) + r_p_i - r_n_i = y_i.
struct LpStandardForm {
  std::size_t d = 0;
  std::size_t m = 0;
  Vector cost;
  Matrix constraints;
  Vector rhs;
  std::vector<std::string> variable_names;

  std::size_t columns() const { return 2 * d + 2 * m; }
  std::size_t beta_pos(std::size_t j) const { return j; }
  std::size_t beta_neg(std::size_t j) const { return d + j; }
  std::size_t resid_pos(std::size_t i) const { return 2 * d + i; }
  std::size_t resid_neg(std::size_t i) const { return 2 * d + m + i; }
};

enum class PivotRule { bland, dantzig_with_bland_fallback };

struct SimplexConfig {
  std::optional<std::size_t> max_pivots;  // default 50 * columns
  PivotRule pivot_rule = PivotRule::dantzig_with_bland_fallback;
  double feasibility_tolerance = 1e-9;
};

struct LpSolution {
  Vector primal;
  double objective = 0.0;  // c'x of the final basis
  std::size_t pivots = 0;
  bool optimal = false;
  bool initial_basis_feasible = false;
  bool switched_to_bland = false;
  std::size_t objective_increases = 0;
};

inline LpStandardForm formulate(const ProblemSpec& spec) {
  const std::size_t d = spec.d();
  const std::size_t m = spec.m();
  LpStandardForm lp;
  lp.d = d;
  lp.m = m;
  const std::size_t n = lp.columns();
  lp.cost.assign(n, 1.0);
  for (std::size_t j = 0; j < d; ++j) lp.cost[lp.beta_pos(j)] = lp.cost[lp.beta_neg(j)] = spec.lambda_eff();
  lp.constraints = Matrix(m, n);
  const auto& x = spec.data.x();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      lp.constraints(i, lp.beta_pos(j)) = x(i, j);
      lp.constraints(i, lp.beta_neg(j)) = -x(i, j);
    }
    lp.constraints(i, lp.resid_pos(i)) = 1.0;
    lp.constraints(i, lp.resid_neg(i)) = -1.0;
  }
  lp.rhs = spec.data.y();
  lp.variable_names.reserve(n);
  for (std::size_t j = 0; j < d; ++j) lp.variable_names.push_back("bp_" + std::to_string(j));
  for (std::size_t j = 0; j < d; ++j) lp.variable_names.push_back("bn_" + std::to_string(j));
  for (std::size_t i = 0; i < m; ++i) lp.variable_names.push_back("rp_" + std::to_string(i));
  for (std::size_t i = 0; i < m; ++i) lp.variable_names.push_back("rn_" + std::to_string(i));
  return lp;
}

// Sign-split embedding of beta: feasible for the LP, with cost equal to f(beta).
inline Vector embed(const LpStandardForm& lp, std::span<const double> beta, std::span<const double> resid) {
  Vector v(lp.columns(), 0.0);
  for (std::size_t j = 0; j < lp.d; ++j) {
    v[lp.beta_pos(j)] = std::max(beta[j], 0.0);
    v[lp.beta_neg(j)] = std::max(-beta[j], 0.0);
  }
  for (std::size_t i = 0; i < lp.m; ++i) {
    v[lp.resid_pos(i)] = std::max(resid[i], 0.0);
    v[lp.resid_neg(i)] = std::max(-resid[i], 0.0);
  }
  return v;
}

inline Coefficients recover_beta(const LpStandardForm& lp, std::span<const double> primal) {
  Coefficients beta(lp.d);
  for (std::size_t j = 0; j < lp.d; ++j) beta[j] = primal[lp.beta_pos(j)] - primal[lp.beta_neg(j)];
  return beta;
}

// Dense tableau primal simplex. The starting basis takes r_p_i or r_n_i for each row
// depending on the sign of y_i, which is feasible without a phase-1. Dantzig pricing drops
// to Bland's rule for good once a run of degenerate pivots reaches the column count.
inline LpSolution simplex_solve(const LpStandardForm& lp, const SimplexConfig& cfg = {}) {
  const std::size_t m = lp.m;
  const std::size_t n = lp.columns();
  if (lp.constraints.rows() != m || lp.constraints.cols() != n || lp.cost.size() != n || lp.rhs.size() != m)
    throw InvalidInput("LP dimensions are inconsistent");
  const std::size_t max_pivots = cfg.max_pivots.value_or(50 * n);
  if (max_pivots < 1) throw InvalidInput("max_pivots must be >= 1");
  const double tol = cfg.feasibility_tolerance;

  // tableau rows hold [A | b]; the last row holds reduced costs and -objective
  Matrix t(m + 1, n + 1);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = (lp.rhs[i] >= 0.0) ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n; ++j) t(i, j) = sign * lp.constraints(i, j);
    t(i, n) = sign * lp.rhs[i];
    basis[i] = (sign > 0.0) ? lp.resid_pos(i) : lp.resid_neg(i);
    if (t(i, basis[i]) != 1.0) throw InternalError("sign-split starting basis is not an identity");
  }

  LpSolution sol;
  sol.initial_basis_feasible = true;
  for (std::size_t i = 0; i < m; ++i)
    if (t(i, n) < -tol) sol.initial_basis_feasible = false;

  for (std::size_t j = 0; j <= n; ++j) {
    double z = (j < n) ? lp.cost[j] : 0.0;
    for (std::size_t i = 0; i < m; ++i) z -= lp.cost[basis[i]] * t(i, j);
    t(m, j) = z;
  }

  bool bland = cfg.pivot_rule == PivotRule::bland;
  std::size_t degenerate_run = 0;
  double objective = -t(m, n);
  double cost_scale = 1.0;
  for (double c : lp.cost) cost_scale = std::max(cost_scale, std::abs(c));
  const double price_tol = tol * cost_scale;

  while (true) {
    std::optional<std::size_t> enter;
    for (std::size_t j = 0; j < n; ++j) {
      if (t(m, j) >= -price_tol) continue;
      if (bland) {
        enter = j;
        break;
      }
      if (!enter || t(m, j) < t(m, *enter)) enter = j;
    }
    if (!enter) {
      sol.optimal = true;
      break;
    }
    if (sol.pivots >= max_pivots) break;

    const std::size_t q = *enter;
    std::optional<std::size_t> leave;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t(i, q) <= 1e-12) continue;
      const double ratio = t(i, n) / t(i, q);
      if (!leave || ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[*leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (!leave) throw InternalError("simplex detected an unbounded direction; LAD-LASSO LPs are bounded");

    const std::size_t p = *leave;
    const double piv = t(p, q);
    for (std::size_t j = 0; j <= n; ++j) t(p, j) /= piv;
    t(p, q) = 1.0;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == p) continue;
      const double factor = t(i, q);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= n; ++j) t(i, j) -= factor * t(p, j);
      t(i, q) = 0.0;
    }
    basis[p] = q;
    ++sol.pivots;

    const double next = -t(m, n);
    if (next > objective + tol * std::max(1.0, std::abs(objective))) ++sol.objective_increases;
    if (best_ratio <= tol) {
      if (++degenerate_run >= n) bland = true;
    } else {
      degenerate_run = 0;
    }
    objective = next;
  }

  sol.switched_to_bland = bland && cfg.pivot_rule != PivotRule::bland;
  sol.primal.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) sol.primal[basis[i]] = std::max(t(i, n), 0.0);
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.cost[j] * sol.primal[j];
  return sol;
}

// formulate + simplex + recovery; timing covers the formulation as well.
inline SolveResult solve_lp(const ProblemSpec& spec, const SimplexConfig& cfg = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const LpStandardForm lp = formulate(spec);
  const LpSolution sol = simplex_solve(lp, cfg);
  SolveResult out;
  out.solver = SolverId::lp;
  out.beta = recover_beta(lp, sol.primal);
  out.objective = evaluate_objective(spec, out.beta);
  out.iterations = sol.pivots;
  out.objective_evals = sol.pivots + 1;
  out.converged = sol.optimal;
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// Plain-text export with fixed columns: names left-aligned in 16 characters, numbers
// right-aligned in 25 characters (%.16e). Sections: COST, ROWS (one block per constraint,
// nonzero coefficients only), RHS, BOUNDS.
inline void write_lp_text(const LpStandardForm& lp, std::ostream& os) {
  auto line = [&](const std::string& name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-16s%25.16e\n", name.c_str(), v);
    os << buf;
  };
  os << "* LAD-LASSO standard form: minimize c'x subject to A x = b, x >= 0\n";
  os << "VARIABLES " << lp.columns() << "\n";
  os << "ROWS " << lp.m << "\n";
  os << "COST\n";
  for (std::size_t j = 0; j < lp.columns(); ++j) line(lp.variable_names[j], lp.cost[j]);
  for (std::size_t i = 0; i < lp.m; ++i) {
    os << "ROW " << i << " EQ\n";
    for (std::size_t j = 0; j < lp.columns(); ++j)
      if (lp.constraints(i, j) != 0.0) line(lp.variable_names[j], lp.constraints(i, j));
  }
  os << "RHS\n";
  for (std::size_t i = 0; i < lp.m; ++i) line("row_" + std::to_string(i), lp.rhs[i]);
  os << "BOUNDS\n";
  for (std::size_t j = 0; j < lp.columns(); ++j) line(lp.variable_names[j], 0.0);
  os << "END\n";
}

}  // namespace ladlasso
