#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ladlasso/error.hpp"
#include "ladlasso/piecewise.hpp"

namespace ladlasso {

using Vector = std::vector<double>;
// Candidate parameter vector; length equals the number of explanatory variables.
using Coefficients = std::vector<double>;

// Dense row-major matrix, just enough for m x d design matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.front().size() : 0;
    Matrix out(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw InvalidInput("ragged matrix rows");
      std::copy(rows[i].begin(), rows[i].end(), out.row(i).begin());
    }
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Regression inputs: x is m points by d explanatory variables, y has length m.
class Dataset {
 public:
  Dataset(Matrix x, Vector y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.rows() < 1 || x_.cols() < 1) throw InvalidInput("dataset needs m >= 1 and d >= 1");
    if (y_.size() != x_.rows()) throw InvalidInput("y length does not match number of rows of x");
    for (double v : x_.data())
      if (!std::isfinite(v)) throw InvalidInput("non-finite entry in x");
    for (double v : y_)
      if (!std::isfinite(v)) throw InvalidInput("non-finite entry in y");
  }

  std::size_t m() const { return x_.rows(); }
  std::size_t d() const { return x_.cols(); }
  const Matrix& x() const { return x_; }
  const Vector& y() const { return y_; }

  bool operator==(const Dataset&) const = default;

 private:
  Matrix x_;
  Vector y_;
};

inline constexpr double kDefaultLambdaFloor = 1e-9;

// A dataset plus the L1 penalty weight. The effective weight is never below lambda_floor,
// which breaks ties on flat LAD segments.
struct ProblemSpec {
  Dataset data;
  double lambda = 0.0;
  double lambda_floor = kDefaultLambdaFloor;

  ProblemSpec(Dataset data_in, double lambda_in, double floor_in = kDefaultLambdaFloor)
      : data(std::move(data_in)), lambda(lambda_in), lambda_floor(floor_in) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be finite and >= 0");
    if (!(lambda_floor > 0.0) || !std::isfinite(lambda_floor))
      throw InvalidInput("lambda_floor must be finite and > 0");
  }

  double lambda_eff() const { return std::max(lambda, lambda_floor); }
  std::size_t m() const { return data.m(); }
  std::size_t d() const { return data.d(); }
};

enum class SolverId { lp, brute, locus_ternary, locus_quadrature, ccd_plain };

inline std::string_view to_string(SolverId id) {
  switch (id) {
    case SolverId::lp: return "lp";
    case SolverId::brute: return "brute";
    case SolverId::locus_ternary: return "locus_ternary";
    case SolverId::locus_quadrature: return "locus_quadrature";
    case SolverId::ccd_plain: return "ccd_plain";
  }
  return "unknown";
}

inline std::optional<SolverId> solver_from_string(std::string_view name) {
  for (auto id : {SolverId::lp, SolverId::brute, SolverId::locus_ternary, SolverId::locus_quadrature,
                  SolverId::ccd_plain})
    if (to_string(id) == name) return id;
  return std::nullopt;
}

struct SolveResult {
  Coefficients beta;
  double objective = 0.0;
  SolverId solver = SolverId::brute;
  std::size_t iterations = 0;
  std::size_t objective_evals = 0;
  double wall_time = 0.0;  // seconds
  bool converged = false;
  // Coordinate updates that raised the objective; CCD-based solvers only. Always zero unless
  // something is wrong.
  std::size_t descent_violations = 0;
};

inline void check_coefficients(const ProblemSpec& spec, std::span<const double> beta) {
  if (beta.size() != spec.d())
    throw InvalidInput("coefficient vector has length " + std::to_string(beta.size()) + ", expected " +
                       std::to_string(spec.d()));
  for (double b : beta)
    if (!std::isfinite(b)) throw InvalidInput("coefficient vector contains a non-finite value");
}

// f(beta) = sum_i |y_i - x_i . beta| + lambda_eff * sum_j |beta_j|
inline double evaluate_objective(const ProblemSpec& spec, std::span<const double> beta) {
  check_coefficients(spec, beta);
  const auto& x = spec.data.x();
  const auto& y = spec.data.y();
  double fit = 0.0;
  for (std::size_t i = 0; i < spec.m(); ++i) {
    double pred = 0.0;
    const auto row = x.row(i);
    for (std::size_t j = 0; j < spec.d(); ++j) pred += row[j] * beta[j];
    fit += std::abs(y[i] - pred);
  }
  double l1 = 0.0;
  for (double b : beta) l1 += std::abs(b);
  return fit + spec.lambda_eff() * l1;
}

inline Vector residuals(const ProblemSpec& spec, std::span<const double> beta) {
  check_coefficients(spec, beta);
  Vector r(spec.data.y());
  const auto& x = spec.data.x();
  for (std::size_t i = 0; i < spec.m(); ++i) {
    const auto row = x.row(i);
    for (std::size_t j = 0; j < spec.d(); ++j) r[i] -= row[j] * beta[j];
  }
  return r;
}

// Builds g(t) = f(beta with beta_j := t) from the residuals that exclude axis j.
// `partial` must hold y - x.beta + x_{.j} beta_j (i.e. the residual with axis j removed).
inline PiecewiseLinear1D axis_restriction_from_partial(const ProblemSpec& spec, std::span<const double> partial,
                                                       std::span<const double> beta, std::size_t j) {
  const auto& x = spec.data.x();
  const double lam = spec.lambda_eff();
  PiecewiseLinear1D g;
  g.breakpoints.reserve(spec.m() + 1);
  double constant = 0.0;
  for (std::size_t i = 0; i < spec.m(); ++i) {
    const double a = x(i, j);
    if (a != 0.0)
      g.breakpoints.push_back({partial[i] / a, std::abs(a)});
    else
      constant += std::abs(partial[i]);
  }
  g.breakpoints.push_back({0.0, lam});
  for (std::size_t k = 0; k < beta.size(); ++k)
    if (k != j) constant += lam * std::abs(beta[k]);
  g.constant = constant;
  return g;
}

inline PiecewiseLinear1D axis_restriction(const ProblemSpec& spec, std::span<const double> beta, std::size_t j) {
  check_coefficients(spec, beta);
  if (j >= spec.d()) throw InvalidInput("axis index out of range");
  Vector partial = residuals(spec, beta);
  for (std::size_t i = 0; i < spec.m(); ++i) partial[i] += spec.data.x()(i, j) * beta[j];
  return axis_restriction_from_partial(spec, partial, beta, j);
}

// (a - ref) / |ref|, with the denominator floored so exact zero references stay finite.
inline double relative_gap(double value, double reference) {
  return (value - reference) / std::max(std::abs(reference), 1e-12);
}

}  // namespace ladlasso
