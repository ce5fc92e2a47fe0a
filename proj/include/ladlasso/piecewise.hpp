#pragma once

#include <cmath>
#include <vector>

namespace ladlasso {

struct Breakpoint {
  double location = 0.0;
  double weight = 0.0;
};

// g(t) = constant + sum_k weight_k * |t - location_k|, with weight_k >= 0.
// Convex and piecewise linear; every 1-D slice of the LAD-LASSO objective has this form.
struct PiecewiseLinear1D {
  std::vector<Breakpoint> breakpoints;
  double constant = 0.0;

  double operator()(double t) const {
    double v = constant;
    for (const auto& b : breakpoints) v += b.weight * std::abs(t - b.location);
    return v;
  }

  double total_weight() const {
    double w = 0.0;
    for (const auto& b : breakpoints) w += b.weight;
    return w;
  }

  // One-sided derivatives at t. A breakpoint sitting exactly at t contributes
  // -weight to the left slope and +weight to the right slope.
  double right_slope(double t) const {
    double s = 0.0;
    for (const auto& b : breakpoints) s += (b.location <= t) ? b.weight : -b.weight;
    return s;
  }

  double left_slope(double t) const {
    double s = 0.0;
    for (const auto& b : breakpoints) s += (b.location < t) ? b.weight : -b.weight;
    return s;
  }
};

}  // namespace ladlasso
