#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "coneflow/problem_io.hpp"

namespace {

using namespace coneflow;

std::optional<uint64_t> env_seed() {
  const char* env = std::getenv("CONEFLOW_SEED");
  if (!env || !*env) return std::nullopt;
  try {
    return static_cast<uint64_t>(std::stoull(env));
  } catch (...) {
    fail(ErrorCode::ParseError, "CONEFLOW_SEED must be an unsigned integer");
  }
}

void emit(const std::string& text, const std::optional<std::string>& out_path) {
  if (out_path) {
    std::ofstream out(*out_path);
    if (!out) fail(ErrorCode::ParseError, "cannot write '" + *out_path + "'");
    out << text;
  } else {
    std::cout << text;
  }
}

int run_solve(const std::string& file, bool oracle_check,
              const std::optional<std::string>& trace_path,
              const std::optional<std::string>& out_path,
              const std::optional<double>& tol,
              const std::optional<int>& max_iters) {
  ProblemSpec spec = load_problem(file);
  if (tol) spec.options.tol = *tol;
  if (max_iters) spec.options.max_iters = *max_iters;
  if (auto seed = env_seed()) spec.options.seed = seed;

  check_problem(spec);
  SolveReport rep = solve_problem(spec);

  std::optional<double> delta;
  if (oracle_check) {
    delta = oracle_delta(rep, oracle_solve(spec));
  }
  if (trace_path) {
    std::ofstream tr(*trace_path);
    if (!tr) fail(ErrorCode::ParseError, "cannot write '" + *trace_path + "'");
    write_trace_csv(tr, rep.trace);
  }
  emit(report_to_json(spec, rep, delta, trace_path).dump(2) + "\n", out_path);
  return 0;
}

int run_sweep(const std::string& file, double alpha_min, double alpha_max,
              int points, const std::optional<std::string>& out_path) {
  ProblemSpec spec = load_problem(file);
  if (points < 1) {
    fail(ErrorCode::ParseError, "--points must be at least 1");
  }
  std::vector<double> grid;
  if (points == 1) {
    grid.push_back(alpha_min);
  } else {
    for (int i = 0; i < points; ++i) {
      grid.push_back(alpha_min +
                     (alpha_max - alpha_min) * i / double(points - 1));
    }
  }
  PerronOptions po;
  po.max_iters = spec.options.max_iters;
  std::vector<SweepPoint> pts = sweep_alpha(family_for(spec), grid, po);
  std::ostringstream os;
  write_sweep_csv(os, pts);
  emit(os.str(), out_path);
  return 0;
}

int run_check(const std::string& file) {
  ProblemSpec spec = load_problem(file);
  check_problem(spec);
  std::cout << "ok: " << kind_to_string(spec.kind)
            << " assumptions hold\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "coneflow: Lyapunov / Riccati / positive-Bellman solvers driven by "
      "homogenized positive dynamical systems"};
  app.require_subcommand(1);

  std::string file;
  bool oracle_check = false;
  std::optional<std::string> trace_path;
  std::optional<std::string> out_path;
  std::optional<double> tol;
  std::optional<int> max_iters;

  CLI::App* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("file", file, "problem file (JSON)")->required();
  solve->add_flag("--oracle-check", oracle_check,
                  "cross-check against the matching classical oracle");
  solve->add_option("--trace", trace_path, "write the iteration trace CSV");
  solve->add_option("--out", out_path, "write the report here instead of stdout");
  solve->add_option("--tol", tol, "residual tolerance override");
  solve->add_option("--max-iters", max_iters, "iteration budget override");

  double alpha_min = 0.0, alpha_max = 0.0;
  int points = 0;
  CLI::App* sweep =
      app.add_subcommand("sweep", "eigenvalue-vs-alpha curve of the family");
  sweep->add_option("file", file, "problem file (JSON)")->required();
  sweep->add_option("--alpha-min", alpha_min, "grid start")->required();
  sweep->add_option("--alpha-max", alpha_max, "grid end")->required();
  sweep->add_option("--points", points, "grid size")->required();
  sweep->add_option("--out", out_path, "write rows here instead of stdout");

  CLI::App* check =
      app.add_subcommand("check", "run the assumption gates only");
  check->add_option("file", file, "problem file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (solve->parsed()) {
      return run_solve(file, oracle_check, trace_path, out_path, tol,
                       max_iters);
    }
    if (sweep->parsed()) {
      return run_sweep(file, alpha_min, alpha_max, points, out_path);
    }
    return run_check(file);
  } catch (const coneflow::SolverError& e) {
    std::cerr << "error [" << coneflow::error_code_name(e.code())
              << "]: " << e.what() << "\n";
    return coneflow::error_exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
