#pragma once

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coneflow/lyapflow.hpp"
#include "coneflow/oracle.hpp"
#include "coneflow/report.hpp"
#include "coneflow/sysprops.hpp"

namespace coneflow {

enum class ProblemKind {
  LyapCt,
  LyapDt,
  LyapStochastic,
  LyapWeighted,
  RiccatiCt,
  RiccatiDt,
  PositiveBellman,
  PositiveLinear,
};

std::string kind_to_string(ProblemKind kind);
ProblemKind kind_from_string(const std::string& s);

struct SolveRunOptions {
  double tol = 1e-9;
  int max_iters = 200000;
  std::pair<double, double> alpha_bracket{1e-6, 1e2};
  std::optional<uint64_t> seed;  // seeds the random interior start
};

// One parsed problem file. Field names in the file are exactly
// kind, A, B, C, E, R, A_list, s, r, L_cert, options; the positive_linear
// constant vector rides in s.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::LyapCt;
  SystemMatrices sys;
  std::optional<Eigen::MatrixXd> R;
  std::optional<Eigen::VectorXd> s;
  std::optional<Eigen::VectorXd> r;
  std::optional<Eigen::MatrixXd> L_cert;
  SolveRunOptions options;
};

ProblemSpec parse_problem(const nlohmann::json& j);
ProblemSpec load_problem(const std::string& path);

// Assumption gates only; throws the matching typed error on violation.
void check_problem(const ProblemSpec& spec);

SolveReport solve_problem(const ProblemSpec& spec);

// Matching classical oracle for the problem kind.
oracle::OracleResult oracle_solve(const ProblemSpec& spec);

// Relative Frobenius (matrix solutions) or relative infinity-norm (vector
// solutions) distance between the solver and oracle solutions.
double oracle_delta(const SolveReport& rep, const oracle::OracleResult& orc);

// Defining-equation residual of the reported solution, recomputed by the
// oracle-side residual routines.
double recompute_residual(const ProblemSpec& spec, const SolveReport& rep);

// Operator family alpha -> ConeOperator for the sweep subcommand.
std::function<ConeOperator(double)> family_for(const ProblemSpec& spec);

nlohmann::json report_to_json(const ProblemSpec& spec, const SolveReport& rep,
                              std::optional<double> oracle_delta_value,
                              const std::optional<std::string>& trace_path);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

// 17 significant digits; round-trips doubles exactly.
std::string format_g17(double v);

}  // namespace coneflow
