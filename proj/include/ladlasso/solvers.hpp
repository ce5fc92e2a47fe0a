#pragma once

#include <optional>

#include "ladlasso/brute.hpp"
#include "ladlasso/ccd.hpp"
#include "ladlasso/locus.hpp"
#include "ladlasso/lp.hpp"
#include "ladlasso/model.hpp"

namespace ladlasso {

// Knobs shared by the command-line tools; each solver reads the part it needs.
struct SolverOptions {
  double outer_tolerance = 1e-8;
  double inner_tolerance = 1e-10;  // CCD sweep tolerance
  std::size_t probes = 8;
  std::optional<std::size_t> outer_axis;
  SimplexConfig simplex;
  BruteConfig brute;
};

inline LocusConfig locus_config(SolverId id, const SolverOptions& opt) {
  LocusConfig cfg;
  cfg.outer_search = (id == SolverId::locus_quadrature) ? OuterSearch::quadrature : OuterSearch::ternary;
  cfg.outer_tolerance = opt.outer_tolerance;
  cfg.probes = opt.probes;
  cfg.outer_axis = opt.outer_axis;
  cfg.inner.sweep_tolerance = opt.inner_tolerance;
  return cfg;
}

inline SolveResult solve(const ProblemSpec& spec, SolverId id, const SolverOptions& opt = {}) {
  switch (id) {
    case SolverId::lp: return solve_lp(spec, opt.simplex);
    case SolverId::brute: return solve_brute(spec, opt.brute);
    case SolverId::locus_ternary:
    case SolverId::locus_quadrature: return solve_locus(spec, locus_config(id, opt));
    case SolverId::ccd_plain: {
      CcdConfig cfg;
      cfg.sweep_tolerance = opt.inner_tolerance;
      return ccd_descend(spec, Coefficients(spec.d(), 0.0), cfg);
    }
  }
  throw InvalidInput("unknown solver");
}

}  // namespace ladlasso
