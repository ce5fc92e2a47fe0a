#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ladlasso/cli.hpp"

using namespace ladlasso;

namespace {

void add_solver_knobs(CLI::App* cmd, SolverOptions& opt, std::optional<std::size_t>& outer_axis) {
  cmd->add_option("--outer-tol", opt.outer_tolerance, "locus outer search tolerance (relative to the bracket)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--inner-tol", opt.inner_tolerance, "CCD sweep tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--probes", opt.probes, "probes per quadrature round")->check(CLI::Range(3, 1000));
  cmd->add_option("--outer-axis", outer_axis, "0-based outer axis for the locus solvers");
}

SolverId parse_solver(const std::string& name) {
  if (auto id = solver_from_string(name)) return *id;
  throw CLI::ValidationError("--solver", "unknown solver '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LAD-LASSO solvers, generator and benchmark harness"};
  app.require_subcommand(1);

  // solve
  cli::SolveArgs solve_args;
  std::string solve_solver = "locus_ternary";
  std::optional<std::size_t> solve_axis;
  std::optional<std::string> dump_lp;
  auto* solve = app.add_subcommand("solve", "solve one dataset CSV");
  solve->add_option("dataset", solve_args.dataset, "dataset CSV (header x1,...,xd,y)")->required();
  solve->add_option("--lambda", solve_args.lambda, "L1 penalty weight")->required()->check(CLI::NonNegativeNumber);
  solve->add_option("--solver", solve_solver, "lp | brute | locus_ternary | locus_quadrature | ccd_plain");
  solve->add_option("--dump-lp", dump_lp, "write the LP standard form to this path");
  add_solver_knobs(solve, solve_args.options, solve_axis);

  // check
  cli::CheckArgs check_args;
  std::string check_d = "1:3", check_m = "4:12";
  std::optional<std::string> check_out;
  std::optional<std::size_t> check_axis;
  auto* check = app.add_subcommand("check", "cross-solver agreement against brute force");
  check->add_option("--d", check_d, "dimension range, e.g. 1:3");
  check->add_option("--m", check_m, "row-count range, e.g. 4:12");
  check->add_option("--lambda", check_args.lambdas, "penalty weights to draw from")->expected(1, -1);
  check->add_option("--instances", check_args.instances, "number of instances");
  check->add_option("--seed", check_args.seed, "base seed; instance k uses seed + k");
  check->add_option("--parallel", check_args.parallel, "worker threads")->check(CLI::PositiveNumber);
  check->add_option("--out", check_out, "per-instance CSV path (default stdout)");
  add_solver_knobs(check, check_args.options, check_axis);

  // bench
  cli::BenchArgs bench_args;
  std::string bench_d = "1:5";
  std::vector<std::string> bench_solvers;
  std::optional<std::string> bench_out, bench_medians;
  std::optional<std::size_t> bench_axis;
  auto* bench = app.add_subcommand("bench", "timing grid over d and m");
  bench->add_option("--d", bench_d, "dimension range, e.g. 1:5");
  bench->add_option("--m", bench_args.m, "row counts")->expected(1, -1);
  bench->add_option("--repeats", bench_args.repeats, "instances per cell");
  bench->add_option("--solver", bench_solvers, "solvers to time (default lp brute locus_ternary locus_quadrature)")
      ->expected(1, -1);
  bench->add_option("--lambda", bench_args.lambda, "L1 penalty weight")->check(CLI::NonNegativeNumber);
  bench->add_option("--seed", bench_args.seed, "base seed");
  bench->add_option("--out", bench_out, "timing CSV path (default stdout)");
  bench->add_option("--medians", bench_medians, "per-cell median CSV path (default stderr)");
  add_solver_knobs(bench, bench_args.options, bench_axis);

  // gen
  GenSpec gen_spec;
  std::string gen_out;
  std::optional<std::size_t> informative;
  std::vector<double> coefficients;
  auto* gen = app.add_subcommand("gen", "write a synthetic dataset and its metadata sidecar");
  gen->add_option("output", gen_out, "dataset CSV path; metadata goes to <path>.meta.json")->required();
  gen->add_option("--d", gen_spec.d, "columns")->check(CLI::PositiveNumber);
  gen->add_option("--m", gen_spec.m, "rows")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_spec.seed, "generator seed");
  gen->add_option("--informative", informative, "leading columns with nonzero coefficients (default d)");
  gen->add_option("--coef", coefficients, "true coefficients (overrides the random draw)")->expected(1, -1);
  gen->add_option("--noise", gen_spec.noise_sigma, "noise standard deviation");
  gen->add_option("--outlier-fraction", gen_spec.outlier_fraction, "fraction of rows with amplified noise");
  gen->add_option("--outlier-scale", gen_spec.outlier_scale, "noise multiplier on outlier rows");

  try {
    app.parse(argc, argv);
    if (*solve) {
      solve_args.solver = parse_solver(solve_solver);
      solve_args.options.outer_axis = solve_axis;
      solve_args.dump_lp = dump_lp;
      return cli::cmd_solve(solve_args, std::cout, std::cerr);
    }
    if (*check) {
      check_args.d = cli::parse_range(check_d);
      check_args.m = cli::parse_range(check_m);
      check_args.options.outer_axis = check_axis;
      if (check_out) {
        std::ofstream f(*check_out);
        if (!f) throw InvalidInput("cannot write '" + *check_out + "'");
        return cli::cmd_check(check_args, f, std::cerr);
      }
      return cli::cmd_check(check_args, std::cout, std::cerr);
    }
    if (*bench) {
      bench_args.d = cli::parse_range(bench_d);
      bench_args.options.outer_axis = bench_axis;
      if (!bench_solvers.empty()) {
        bench_args.solvers.clear();
        for (const auto& s : bench_solvers) bench_args.solvers.push_back(parse_solver(s));
      }
      std::ofstream rows_file, medians_file;
      if (bench_out) {
        rows_file.open(*bench_out);
        if (!rows_file) throw InvalidInput("cannot write '" + *bench_out + "'");
      }
      if (bench_medians) {
        medians_file.open(*bench_medians);
        if (!medians_file) throw InvalidInput("cannot write '" + *bench_medians + "'");
      }
      std::ostream& rows = bench_out ? static_cast<std::ostream&>(rows_file) : std::cout;
      std::ostream& medians = bench_medians ? static_cast<std::ostream&>(medians_file) : std::cerr;
      return cli::cmd_bench(bench_args, rows, medians, std::cerr);
    }
    if (*gen) {
      gen_spec.n_informative = informative;
      if (!coefficients.empty()) gen_spec.true_coefficients = coefficients;
      return cli::cmd_gen(gen_spec, gen_out, std::cerr);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::input_error;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::input_error;
  }
  return cli::ok;
}
