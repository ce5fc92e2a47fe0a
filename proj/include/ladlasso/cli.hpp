#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "ladlasso/brute.hpp"
#include "ladlasso/datagen.hpp"
#include "ladlasso/error.hpp"
#include "ladlasso/io.hpp"
#include "ladlasso/lp.hpp"
#include "ladlasso/model.hpp"
#include "ladlasso/pcg32.hpp"
#include "ladlasso/solvers.hpp"

namespace ladlasso::cli {

enum ExitCode : int { ok = 0, input_error = 1, not_converged = 2, solver_crash = 3, disagreement = 4 };

struct Range {
  std::size_t lo = 1;
  std::size_t hi = 1;
};

// "3" or "1:5" (inclusive).
inline Range parse_range(const std::string& text) {
  const auto colon = text.find(':');
  auto num = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (s.empty() || pos != s.size()) throw InvalidInput("bad range '" + text + "'");
    return static_cast<std::size_t>(v);
  };
  Range r;
  if (colon == std::string::npos) {
    r.lo = r.hi = num(text);
  } else {
    r.lo = num(text.substr(0, colon));
    r.hi = num(text.substr(colon + 1));
  }
  if (r.lo > r.hi) throw InvalidInput("empty range '" + text + "'");
  return r;
}

// Re-evaluates the reported objective from beta before anything is printed.
inline void revalidate(const ProblemSpec& spec, const SolveResult& r) {
  const double f = evaluate_objective(spec, r.beta);
  if (std::abs(f - r.objective) > 1e-9 * std::max(1.0, std::abs(f)))
    throw InternalError(std::string(to_string(r.solver)) + " reported objective " + format_number(r.objective) +
                        " but beta evaluates to " + format_number(f));
}

// ---- solve ----------------------------------------------------------------------------

struct SolveArgs {
  std::string dataset;
  double lambda = 0.0;
  SolverId solver = SolverId::locus_ternary;
  SolverOptions options;
  std::optional<std::string> dump_lp;
};

inline int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<ProblemSpec> spec;
  try {
    spec.emplace(read_dataset_csv(a.dataset), a.lambda);
    if (a.options.outer_axis && *a.options.outer_axis >= spec->d()) throw InvalidInput("--outer-axis out of range");
    if (a.dump_lp) {
      std::ofstream f(*a.dump_lp);
      if (!f) throw InvalidInput("cannot write LP dump to '" + *a.dump_lp + "'");
      write_lp_text(formulate(*spec), f);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }

  SolveResult r;
  try {
    r = solve(*spec, a.solver, a.options);
    revalidate(*spec, r);
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return solver_crash;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }

  out << "result solver=" << to_string(r.solver) << " objective=" << format_number(r.objective) << " beta=";
  for (std::size_t j = 0; j < r.beta.size(); ++j) out << (j ? ";" : "") << format_number(r.beta[j]);
  out << " iterations=" << r.iterations << " objective_evals=" << r.objective_evals
      << " wall_time_s=" << format_number(r.wall_time) << " converged=" << (r.converged ? 1 : 0) << "\n";

  out << to_string(r.solver) << ": m=" << spec->m() << " d=" << spec->d() << " lambda=" << format_number(spec->lambda)
      << (r.converged ? ", converged" : ", NOT converged") << " after " << r.iterations << " iterations in "
      << format_number(r.wall_time) << " s\n";
  out << "  objective " << format_number(r.objective) << "\n";
  for (std::size_t j = 0; j < r.beta.size(); ++j) out << "  beta[" << j + 1 << "] " << format_number(r.beta[j]) << "\n";
  return r.converged ? ok : not_converged;
}

// ---- check ----------------------------------------------------------------------------

inline constexpr SolverId kCompared[] = {SolverId::lp, SolverId::brute, SolverId::locus_ternary,
                                         SolverId::locus_quadrature};

struct CheckArgs {
  Range d{1, 3};
  Range m{4, 12};
  std::vector<double> lambdas{0.01, 0.1, 1.0};
  std::size_t instances = 200;
  std::uint64_t seed = 1;
  std::size_t parallel = 1;
  SolverOptions options;
};

struct Instance {
  std::size_t id = 0;
  std::uint64_t seed = 0;
  std::size_t d = 0;
  std::size_t m = 0;
  double lambda = 0.0;
};

// Instance k of a check grid: seed + k drives both the shape draw (a separate PCG stream)
// and the generator.
inline Instance make_instance(const CheckArgs& a, std::size_t k) {
  if (a.lambdas.empty()) throw InvalidInput("at least one lambda is required");
  Instance inst;
  inst.id = k;
  inst.seed = a.seed + k;
  Pcg32 pick(inst.seed, 7);
  inst.d = a.d.lo + pick.bounded(static_cast<std::uint32_t>(a.d.hi - a.d.lo + 1));
  inst.m = a.m.lo + pick.bounded(static_cast<std::uint32_t>(a.m.hi - a.m.lo + 1));
  inst.lambda = a.lambdas[pick.bounded(static_cast<std::uint32_t>(a.lambdas.size()))];
  return inst;
}

inline ProblemSpec instance_problem(const Instance& inst) {
  GenSpec g;
  g.d = inst.d;
  g.m = inst.m;
  g.seed = inst.seed;
  return ProblemSpec(generate(g).data, inst.lambda);
}

struct CheckRow {
  Instance instance;
  std::vector<SolveResult> results;  // in kCompared order
  std::vector<double> gaps;          // relative to brute
  std::string failure;               // nonempty when a solver threw
};

inline CheckRow run_instance(const Instance& inst, const SolverOptions& opt) {
  CheckRow row{inst, {}, {}, {}};
  try {
    const ProblemSpec spec = instance_problem(inst);
    for (SolverId id : kCompared) {
      row.results.push_back(solve(spec, id, opt));
      revalidate(spec, row.results.back());
    }
    const double ref = row.results[1].objective;
    for (const auto& r : row.results) row.gaps.push_back(relative_gap(r.objective, ref));
  } catch (const std::exception& e) {
    row.failure = e.what();
  }
  return row;
}

inline std::vector<CheckRow> run_check(const CheckArgs& a) {
  std::vector<CheckRow> rows(a.instances);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < a.instances; k = next++) rows[k] = run_instance(make_instance(a, k), a.options);
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(a.parallel, a.instances));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

inline void write_check_csv(const std::vector<CheckRow>& rows, std::ostream& out) {
  out << "id,seed,d,m,lambda";
  for (SolverId id : kCompared) {
    const std::string s(to_string(id));
    out << ',' << s << "_objective," << s << "_gap," << s << "_time_s";
  }
  out << '\n';
  for (const auto& row : rows) {
    if (!row.failure.empty()) continue;
    const auto& in = row.instance;
    out << in.id << ',' << in.seed << ',' << in.d << ',' << in.m << ',' << format_number(in.lambda);
    for (std::size_t k = 0; k < row.results.size(); ++k)
      out << ',' << format_number(row.results[k].objective) << ',' << format_number(row.gaps[k]) << ','
          << format_number(row.results[k].wall_time);
    out << '\n';
  }
}

// Exit 0 iff every gap is below 1e-5; 3 (with the seed) on the first solver failure.
inline int cmd_check(const CheckArgs& a, std::ostream& csv, std::ostream& report) {
  std::vector<CheckRow> rows;
  try {
    if (a.instances > 0) make_instance(a, 0);
    rows = run_check(a);
  } catch (const Error& e) {
    report << "error: " << e.what() << "\n";
    return input_error;
  }
  for (const auto& row : rows)
    if (!row.failure.empty()) {
      report << "solver failure on instance " << row.instance.id << " (seed " << row.instance.seed << ", d=" << row.instance.d
             << ", m=" << row.instance.m << ", lambda=" << row.instance.lambda << "): " << row.failure << "\n";
      return solver_crash;
    }
  write_check_csv(rows, csv);

  bool pass = true;
  report << rows.size() << " instances\n";
  for (std::size_t k = 0; k < std::size(kCompared); ++k) {
    double worst = 0.0;
    std::size_t over = 0;
    for (const auto& row : rows) {
      worst = std::max(worst, row.gaps[k]);
      if (!(row.gaps[k] < 1e-5)) ++over;
    }
    pass = pass && over == 0;
    report << "  " << to_string(kCompared[k]) << ": max gap " << format_number(worst) << ", " << over
           << " over 1e-5\n";
  }
  report << (pass ? "all solvers agree with brute force\n" : "DISAGREEMENT\n");
  return pass ? ok : disagreement;
}

// ---- bench ----------------------------------------------------------------------------

struct BenchArgs {
  Range d{1, 5};
  std::vector<std::size_t> m{10, 30};
  std::size_t repeats = 5;
  std::vector<SolverId> solvers{SolverId::lp, SolverId::brute, SolverId::locus_ternary, SolverId::locus_quadrature};
  double lambda = 0.1;
  std::uint64_t seed = 1;
  SolverOptions options;
};

struct BenchRecord {
  SolverId solver = SolverId::lp;
  std::size_t d = 0;
  std::size_t m = 0;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  bool skipped = false;
  SolveResult result;
};

// Cells run sequentially. Repeat r of the c-th (d, m) cell uses seed + c * repeats + r.
inline std::vector<BenchRecord> run_bench(const BenchArgs& a) {
  std::vector<BenchRecord> out;
  std::size_t cell = 0;
  for (std::size_t d = a.d.lo; d <= a.d.hi; ++d)
    for (std::size_t m : a.m) {
      for (std::size_t rep = 0; rep < a.repeats; ++rep) {
        GenSpec g;
        g.d = d;
        g.m = m;
        g.seed = a.seed + cell * a.repeats + rep;
        const ProblemSpec spec(generate(g).data, a.lambda);
        for (SolverId id : a.solvers) {
          BenchRecord rec{id, d, m, rep, g.seed, false, {}};
          if (id == SolverId::brute) {
            try {
              check_brute_caps(spec, a.options.brute);
            } catch (const ProblemTooLarge&) {
              rec.skipped = true;
            }
          }
          if (!rec.skipped) {
            rec.result = solve(spec, id, a.options);
            revalidate(spec, rec.result);
          }
          out.push_back(std::move(rec));
        }
      }
      ++cell;
    }
  return out;
}

struct BenchMedian {
  SolverId solver = SolverId::lp;
  std::size_t d = 0;
  std::size_t m = 0;
  std::size_t runs = 0;
  double median_wall_time = 0.0;
};

inline std::vector<BenchMedian> bench_medians(const std::vector<BenchRecord>& records) {
  std::vector<BenchMedian> out;
  for (const auto& rec : records) {
    if (rec.skipped) continue;
    const bool known = std::any_of(out.begin(), out.end(), [&](const BenchMedian& b) {
      return b.solver == rec.solver && b.d == rec.d && b.m == rec.m;
    });
    if (known) continue;
    std::vector<double> t;
    for (const auto& r : records)
      if (!r.skipped && r.solver == rec.solver && r.d == rec.d && r.m == rec.m) t.push_back(r.result.wall_time);
    std::sort(t.begin(), t.end());
    const std::size_t n = t.size();
    const double med = (n % 2) ? t[n / 2] : 0.5 * (t[n / 2 - 1] + t[n / 2]);
    out.push_back({rec.solver, rec.d, rec.m, n, med});
  }
  return out;
}

inline void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << "solver,d,m,repeat,seed,wall_time_s,objective,converged\n";
  for (const auto& r : records) {
    out << to_string(r.solver) << ',' << r.d << ',' << r.m << ',' << r.repeat << ',' << r.seed << ',';
    if (r.skipped)
      out << ",,skipped\n";
    else
      out << format_number(r.result.wall_time) << ',' << format_number(r.result.objective) << ','
          << (r.result.converged ? "true" : "false") << '\n';
  }
}

inline void write_bench_medians(const std::vector<BenchMedian>& medians, std::ostream& out) {
  out << "solver,d,m,runs,median_wall_time_s\n";
  for (const auto& b : medians)
    out << to_string(b.solver) << ',' << b.d << ',' << b.m << ',' << b.runs << ',' << format_number(b.median_wall_time)
        << '\n';
}

inline int cmd_bench(const BenchArgs& a, std::ostream& csv, std::ostream& medians, std::ostream& err) {
  std::vector<BenchRecord> records;
  try {
    if (a.d.lo < 1) throw InvalidInput("--d must start at 1 or more");
    records = run_bench(a);
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return solver_crash;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }
  write_bench_csv(records, csv);
  write_bench_medians(bench_medians(records), medians);
  return ok;
}

// ---- gen ------------------------------------------------------------------------------

inline std::string sidecar_path(const std::string& csv_path) { return csv_path + ".meta.json"; }

inline nlohmann::json gen_metadata(const GenSpec& g, const GeneratedData& data) {
  nlohmann::json meta;
  meta["m"] = g.m;
  meta["d"] = g.d;
  meta["n_informative"] = g.informative();
  meta["noise_sigma"] = g.noise_sigma;
  meta["outlier_fraction"] = g.outlier_fraction;
  meta["outlier_scale"] = g.outlier_scale;
  meta["seed"] = g.seed;
  meta["coefficients_supplied"] = g.true_coefficients.has_value();
  meta["true_beta"] = data.true_beta;
  return meta;
}

inline int cmd_gen(const GenSpec& g, const std::string& path, std::ostream& err) {
  try {
    const GeneratedData data = generate(g);
    std::ofstream csv(path);
    if (!csv) throw InvalidInput("cannot write '" + path + "'");
    write_dataset_csv(data.data, csv);
    std::ofstream meta(sidecar_path(path));
    if (!meta) throw InvalidInput("cannot write '" + sidecar_path(path) + "'");
    meta << gen_metadata(g, data).dump(2) << '\n';
    if (!csv || !meta) throw InvalidInput("write to '" + path + "' failed");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }
  return ok;
}

}  // namespace ladlasso::cli
