#include "coneflow/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>

#include "coneflow/poslqr.hpp"
#include "coneflow/ricflow.hpp"

namespace coneflow {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& msg) {
  fail(ErrorCode::ParseError, msg);
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) {
    parse_fail("field '" + name + "' must be a nonempty array of rows");
  }
  const int rows = static_cast<int>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    parse_fail("field '" + name + "' must contain rows of numbers");
  }
  const int cols = static_cast<int>(j[0].size());
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) {
      parse_fail("field '" + name + "' is not rectangular");
    }
    for (int k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) {
        parse_fail("field '" + name + "' has a non-numeric entry");
      }
      M(i, k) = j[i][k].get<double>();
    }
  }
  return M;
}

Eigen::VectorXd parse_vector(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) {
    parse_fail("field '" + name + "' must be a nonempty array of numbers");
  }
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      parse_fail("field '" + name + "' has a non-numeric entry");
    }
    v(static_cast<int>(i)) = j[i].get<double>();
  }
  return v;
}

const json& require_field(const json& j, const std::string& name,
                          const std::string& kind) {
  auto it = j.find(name);
  if (it == j.end()) {
    parse_fail("kind '" + kind + "' requires field '" + name + "'");
  }
  return *it;
}

void check_metzler_and_source(const Eigen::MatrixXd& A,
                              const Eigen::VectorXd& c) {
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) {
      if (i != j && A(i, j) < -kMemTol) {
        fail(ErrorCode::NotMetzler,
             "A is not Metzler (negative off-diagonal entry)");
      }
    }
  }
  if (c.minCoeff() < -kMemTol) {
    fail(ErrorCode::AssumptionViolated, "c must be entrywise nonnegative");
  }
}

RiccatiProblem make_riccati(const ProblemSpec& spec) {
  return RiccatiProblem(spec.sys.A, *spec.sys.B, SymMatrix(*spec.R),
                        *spec.sys.C,
                        spec.kind == ProblemKind::RiccatiCt ? TimeDomain::CT
                                                            : TimeDomain::DT);
}

BellmanProblem make_bellman(const ProblemSpec& spec) {
  return BellmanProblem(spec.sys.A, *spec.sys.B, *spec.sys.E, *spec.s, *spec.r,
                        spec.L_cert);
}

ConePoint seeded_start(uint64_t seed, ConeKind kind, int n) {
  std::mt19937_64 rng(seed);
  if (kind == ConeKind::Orthant) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = u(rng);
    return ConePoint::orthant(v);
  }
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd W(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) W(i, j) = g(rng);
  }
  Eigen::MatrixXd X =
      W * W.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
  return ConePoint::psd(SymMatrix(X));
}

SolveOptions solve_options_for(const ProblemSpec& spec) {
  SolveOptions o;
  o.res_tol = spec.options.tol;
  o.max_iters = spec.options.max_iters;
  o.alpha_bracket = spec.options.alpha_bracket;
  if (spec.options.seed) {
    const bool orthant = spec.kind == ProblemKind::PositiveBellman ||
                         spec.kind == ProblemKind::PositiveLinear;
    o.x0 = seeded_start(*spec.options.seed,
                        orthant ? ConeKind::Orthant : ConeKind::Psd,
                        static_cast<int>(spec.sys.A.rows()));
  }
  return o;
}

}  // namespace

std::string kind_to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::LyapCt: return "lyap_ct";
    case ProblemKind::LyapDt: return "lyap_dt";
    case ProblemKind::LyapStochastic: return "lyap_stochastic";
    case ProblemKind::LyapWeighted: return "lyap_weighted";
    case ProblemKind::RiccatiCt: return "riccati_ct";
    case ProblemKind::RiccatiDt: return "riccati_dt";
    case ProblemKind::PositiveBellman: return "positive_bellman";
    case ProblemKind::PositiveLinear: return "positive_linear";
  }
  return "unknown";
}

ProblemKind kind_from_string(const std::string& s) {
  if (s == "lyap_ct") return ProblemKind::LyapCt;
  if (s == "lyap_dt") return ProblemKind::LyapDt;
  if (s == "lyap_stochastic") return ProblemKind::LyapStochastic;
  if (s == "lyap_weighted") return ProblemKind::LyapWeighted;
  if (s == "riccati_ct") return ProblemKind::RiccatiCt;
  if (s == "riccati_dt") return ProblemKind::RiccatiDt;
  if (s == "positive_bellman") return ProblemKind::PositiveBellman;
  if (s == "positive_linear") return ProblemKind::PositiveLinear;
  parse_fail("unknown problem kind '" + s + "'");
}

ProblemSpec parse_problem(const json& j) {
  if (!j.is_object()) parse_fail("problem file must hold a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    parse_fail("field 'kind' (string) is required");
  }
  ProblemSpec spec;
  spec.kind = kind_from_string(j["kind"].get<std::string>());
  const std::string kind = kind_to_string(spec.kind);

  spec.sys.A = parse_matrix(require_field(j, "A", kind), "A");
  const int n = static_cast<int>(spec.sys.A.rows());
  if (spec.sys.A.cols() != n) {
    fail(ErrorCode::DimensionMismatch, "A must be square");
  }

  switch (spec.kind) {
    case ProblemKind::LyapCt:
    case ProblemKind::LyapDt:
      spec.sys.C = parse_matrix(require_field(j, "C", kind), "C");
      break;
    case ProblemKind::LyapStochastic: {
      spec.sys.C = parse_matrix(require_field(j, "C", kind), "C");
      const json& list = require_field(j, "A_list", kind);
      if (!list.is_array()) parse_fail("field 'A_list' must be an array");
      for (size_t i = 0; i < list.size(); ++i) {
        spec.sys.A_list.push_back(parse_matrix(list[i], "A_list"));
      }
      break;
    }
    case ProblemKind::LyapWeighted:
      spec.sys.C = parse_matrix(require_field(j, "C", kind), "C");
      spec.sys.E = parse_matrix(require_field(j, "E", kind), "E");
      break;
    case ProblemKind::RiccatiCt:
    case ProblemKind::RiccatiDt:
      spec.sys.B = parse_matrix(require_field(j, "B", kind), "B");
      spec.sys.C = parse_matrix(require_field(j, "C", kind), "C");
      spec.R = parse_matrix(require_field(j, "R", kind), "R");
      break;
    case ProblemKind::PositiveBellman:
      spec.sys.B = parse_matrix(require_field(j, "B", kind), "B");
      spec.sys.E = parse_matrix(require_field(j, "E", kind), "E");
      spec.s = parse_vector(require_field(j, "s", kind), "s");
      spec.r = parse_vector(require_field(j, "r", kind), "r");
      if (j.contains("L_cert")) {
        spec.L_cert = parse_matrix(j["L_cert"], "L_cert");
      }
      break;
    case ProblemKind::PositiveLinear:
      spec.s = parse_vector(require_field(j, "s", kind), "s");
      break;
  }

  // Dimension consistency beyond squareness of A.
  if (spec.sys.C && spec.sys.C->cols() != n) {
    fail(ErrorCode::DimensionMismatch, "C must have n columns");
  }
  if (spec.sys.B && spec.sys.B->rows() != n) {
    fail(ErrorCode::DimensionMismatch, "B must have n rows");
  }
  if (spec.sys.E && spec.kind == ProblemKind::LyapWeighted &&
      (spec.sys.E->rows() != n || spec.sys.E->cols() != n)) {
    fail(ErrorCode::DimensionMismatch, "E must be n-by-n");
  }
  for (const auto& Ai : spec.sys.A_list) {
    if (Ai.rows() != n || Ai.cols() != n) {
      fail(ErrorCode::DimensionMismatch, "every A_list entry must be n-by-n");
    }
  }
  if (spec.kind == ProblemKind::PositiveLinear && spec.s->size() != n) {
    fail(ErrorCode::DimensionMismatch, "s must have length n");
  }
  if (spec.R && (spec.R->rows() != spec.sys.B->cols() ||
                 spec.R->cols() != spec.sys.B->cols())) {
    fail(ErrorCode::DimensionMismatch, "R must be m-by-m");
  }

  if (j.contains("options")) {
    const json& o = j["options"];
    if (!o.is_object()) parse_fail("field 'options' must be an object");
    if (o.contains("tol")) spec.options.tol = o["tol"].get<double>();
    if (o.contains("max_iters")) {
      spec.options.max_iters = o["max_iters"].get<int>();
    }
    if (o.contains("alpha_bracket")) {
      const json& b = o["alpha_bracket"];
      if (!b.is_array() || b.size() != 2) {
        parse_fail("options.alpha_bracket must be a 2-element array");
      }
      spec.options.alpha_bracket = {b[0].get<double>(), b[1].get<double>()};
    }
    if (o.contains("seed")) {
      spec.options.seed = o["seed"].get<uint64_t>();
    }
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open problem file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(j);
}

void check_problem(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::LyapCt:
      if (!stability(spec.sys.A, StabilityMode::Hurwitz)) {
        fail(ErrorCode::NotHurwitz, "A is not Hurwitz stable");
      }
      if (!observability_ok(spec.sys.A, *spec.sys.C)) {
        fail(ErrorCode::NotObservable, "(A, C) is not observable");
      }
      break;
    case ProblemKind::LyapDt:
      if (!stability(spec.sys.A, StabilityMode::Schur)) {
        fail(ErrorCode::NotSchurStable, "A is not Schur stable");
      }
      if (!observability_ok(spec.sys.A, *spec.sys.C)) {
        fail(ErrorCode::NotObservable, "(A, C) is not observable");
      }
      break;
    case ProblemKind::LyapStochastic:
      if (!observability_ok(spec.sys.A, *spec.sys.C)) {
        fail(ErrorCode::NotObservable, "(A, C) is not observable");
      }
      break;
    case ProblemKind::LyapWeighted: {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(*spec.sys.E);
      const auto& sv = svd.singularValues();
      if (sv(0) == 0.0 || sv(sv.size() - 1) <= kRankTol * sv(0)) {
        fail(ErrorCode::SingularE, "E is singular");
      }
      if (!observability_ok(spec.sys.A, *spec.sys.C)) {
        fail(ErrorCode::NotObservable, "(A, C) is not observable");
      }
      break;
    }
    case ProblemKind::RiccatiCt:
    case ProblemKind::RiccatiDt: {
      RiccatiProblem prob = make_riccati(spec);
      if (!controllability_ok(prob.A, prob.B)) {
        fail(ErrorCode::NotControllable, "(A, B) is not controllable");
      }
      if (!observability_ok(prob.A, prob.C)) {
        fail(ErrorCode::NotObservable, "(A, C) is not observable");
      }
      break;
    }
    case ProblemKind::PositiveBellman: {
      BellmanProblem prob = make_bellman(spec);
      AssumptionReport rep = check_assumptions(prob);
      if (rep.h1 != H1Status::Yes) {
        fail(ErrorCode::AssumptionViolated,
             "assumption H1 not certified: no L with |L| <= E making "
             "A - B L Schur stable was found");
      }
      if (!rep.h2) {
        fail(ErrorCode::AssumptionViolated,
             "assumption H2 fails: the observability-like positivity sum is "
             "not entrywise positive");
      }
      break;
    }
    case ProblemKind::PositiveLinear:
      check_metzler_and_source(spec.sys.A, *spec.s);
      if (!stability(spec.sys.A, StabilityMode::Hurwitz)) {
        fail(ErrorCode::NotHurwitz, "A is not Hurwitz stable");
      }
      break;
  }
}

SolveReport solve_problem(const ProblemSpec& spec) {
  const SolveOptions opts = solve_options_for(spec);
  switch (spec.kind) {
    case ProblemKind::LyapCt:
      return solve_lyap_ct(spec.sys.A, *spec.sys.C, opts);
    case ProblemKind::LyapDt:
      return solve_lyap_dt(spec.sys.A, *spec.sys.C, opts);
    case ProblemKind::LyapStochastic:
      return solve_lyap_stochastic(spec.sys.A, spec.sys.A_list, *spec.sys.C,
                                   opts);
    case ProblemKind::LyapWeighted:
      return solve_lyap_weighted(spec.sys.A, *spec.sys.E, *spec.sys.C, opts);
    case ProblemKind::RiccatiCt:
      return solve_riccati_ct(make_riccati(spec), opts);
    case ProblemKind::RiccatiDt:
      return solve_riccati_dt(make_riccati(spec), opts);
    case ProblemKind::PositiveBellman:
      return solve_positive_bellman(make_bellman(spec), opts);
    case ProblemKind::PositiveLinear:
      return solve_positive_linear(spec.sys.A, *spec.s, opts);
  }
  parse_fail("unhandled problem kind");
}

oracle::OracleResult oracle_solve(const ProblemSpec& spec) {
  using oracle::OracleMethod;
  oracle::OracleResult out;
  const int n = static_cast<int>(spec.sys.A.rows());
  switch (spec.kind) {
    case ProblemKind::LyapCt:
      out.solution =
          oracle::lyap_kron_solve(spec.sys.A, *spec.sys.C, TimeDomain::CT);
      out.method = OracleMethod::KronCT;
      out.iterations_or_size = n * n;
      break;
    case ProblemKind::LyapDt:
      out.solution =
          oracle::lyap_kron_solve(spec.sys.A, *spec.sys.C, TimeDomain::DT);
      out.method = OracleMethod::KronDT;
      out.iterations_or_size = n * n;
      break;
    case ProblemKind::LyapStochastic:
      out.solution = oracle::lyap_kron_solve_stochastic(
          spec.sys.A, spec.sys.A_list, *spec.sys.C);
      out.method = OracleMethod::KronStochastic;
      out.iterations_or_size = n * n;
      break;
    case ProblemKind::LyapWeighted:
      out.solution = oracle::lyap_kron_solve_weighted(spec.sys.A, *spec.sys.E,
                                                      *spec.sys.C);
      out.method = OracleMethod::KronWeighted;
      out.iterations_or_size = n * n;
      break;
    case ProblemKind::RiccatiCt: {
      RiccatiProblem prob = make_riccati(spec);
      out.solution =
          oracle::riccati_ct_oracle(prob.A, prob.B, prob.R, prob.C, 1e-9);
      out.method = OracleMethod::RiccatiIntegration;
      out.iterations_or_size = n;
      break;
    }
    case ProblemKind::RiccatiDt: {
      RiccatiProblem prob = make_riccati(spec);
      out.solution =
          oracle::riccati_dt_value_iter(prob.A, prob.B, prob.R, prob.C, 1e-12);
      out.method = OracleMethod::ValueIteration;
      out.iterations_or_size = n;
      break;
    }
    case ProblemKind::PositiveBellman:
      out.solution = oracle::bellman_iter_oracle(make_bellman(spec), 1e-13);
      out.method = OracleMethod::FixedPointIteration;
      out.iterations_or_size = n;
      break;
    case ProblemKind::PositiveLinear:
      out.solution = oracle::positive_linear_solve(spec.sys.A, *spec.s);
      out.method = OracleMethod::LinearSolve;
      out.iterations_or_size = n;
      break;
  }
  return out;
}

double oracle_delta(const SolveReport& rep, const oracle::OracleResult& orc) {
  if (std::holds_alternative<SymMatrix>(rep.solution)) {
    const Eigen::MatrixXd& Pf = rep.solution_sym().mat();
    const Eigen::MatrixXd& Po = std::get<SymMatrix>(orc.solution).mat();
    return (Pf - Po).norm() / std::max(1e-30, Po.norm());
  }
  const Eigen::VectorXd& pf = rep.solution_vec();
  const Eigen::VectorXd& po = std::get<Eigen::VectorXd>(orc.solution);
  return (pf - po).lpNorm<Eigen::Infinity>() /
         std::max(1.0, po.lpNorm<Eigen::Infinity>());
}

double recompute_residual(const ProblemSpec& spec, const SolveReport& rep) {
  switch (spec.kind) {
    case ProblemKind::LyapCt:
      return oracle::residual_lyap_ct(spec.sys.A, *spec.sys.C,
                                      rep.solution_sym());
    case ProblemKind::LyapDt:
      return oracle::residual_lyap_dt(spec.sys.A, *spec.sys.C,
                                      rep.solution_sym());
    case ProblemKind::LyapStochastic:
      return oracle::residual_lyap_stochastic(spec.sys.A, spec.sys.A_list,
                                              *spec.sys.C, rep.solution_sym());
    case ProblemKind::LyapWeighted:
      return oracle::residual_lyap_weighted(spec.sys.A, *spec.sys.E,
                                            *spec.sys.C, rep.solution_sym());
    case ProblemKind::RiccatiCt:
      return oracle::residual_riccati_ct(spec.sys.A, *spec.sys.B,
                                         SymMatrix(*spec.R), *spec.sys.C,
                                         rep.solution_sym());
    case ProblemKind::RiccatiDt:
      return oracle::residual_riccati_dt(spec.sys.A, *spec.sys.B,
                                         SymMatrix(*spec.R), *spec.sys.C,
                                         rep.solution_sym());
    case ProblemKind::PositiveBellman:
      return oracle::residual_bellman(make_bellman(spec), rep.solution_vec());
    case ProblemKind::PositiveLinear:
      return oracle::residual_positive_linear(spec.sys.A, *spec.s,
                                              rep.solution_vec());
  }
  parse_fail("unhandled problem kind");
}

std::function<ConeOperator(double)> family_for(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::LyapCt: {
      Eigen::MatrixXd A = spec.sys.A, C = *spec.sys.C;
      return [A, C](double a) { return lyap_ct_operator(A, C, a); };
    }
    case ProblemKind::LyapDt: {
      Eigen::MatrixXd A = spec.sys.A, C = *spec.sys.C;
      return [A, C](double a) { return lyap_dt_operator(A, C, a); };
    }
    case ProblemKind::LyapStochastic: {
      Eigen::MatrixXd A = spec.sys.A, C = *spec.sys.C;
      std::vector<Eigen::MatrixXd> list = spec.sys.A_list;
      return [A, list, C](double a) {
        return lyap_stochastic_operator(A, list, C, a);
      };
    }
    case ProblemKind::LyapWeighted: {
      Eigen::MatrixXd A = spec.sys.A, E = *spec.sys.E, C = *spec.sys.C;
      return [A, E, C](double a) { return lyap_weighted_operator(A, E, C, a); };
    }
    case ProblemKind::RiccatiCt:
    case ProblemKind::RiccatiDt: {
      RiccatiProblem prob = make_riccati(spec);
      if (prob.time == TimeDomain::CT) {
        return [prob](double a) { return riccati_ct_operator(prob, a); };
      }
      return [prob](double a) { return riccati_dt_operator(prob, a); };
    }
    case ProblemKind::PositiveBellman: {
      BellmanProblem prob = make_bellman(spec);
      return [prob](double a) { return bellman_operator(prob, a); };
    }
    case ProblemKind::PositiveLinear: {
      Eigen::MatrixXd A = spec.sys.A;
      Eigen::VectorXd c = *spec.s;
      return [A, c](double a) { return positive_linear_operator(A, c, a); };
    }
  }
  parse_fail("unhandled problem kind");
}

nlohmann::json report_to_json(const ProblemSpec& spec, const SolveReport& rep,
                              std::optional<double> oracle_delta_value,
                              const std::optional<std::string>& trace_path) {
  json out;
  out["kind"] = kind_to_string(spec.kind);
  if (std::holds_alternative<SymMatrix>(rep.solution)) {
    const Eigen::MatrixXd& P = rep.solution_sym().mat();
    json rows = json::array();
    for (int i = 0; i < P.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < P.cols(); ++j) row.push_back(P(i, j));
      rows.push_back(row);
    }
    out["solution"] = rows;
  } else {
    const Eigen::VectorXd& p = rep.solution_vec();
    json row = json::array();
    for (int i = 0; i < p.size(); ++i) row.push_back(p(i));
    out["solution"] = row;
  }
  out["alpha"] = rep.alpha;
  out["eigenvalue_at_alpha"] = rep.eigenvalue_at_alpha;
  out["residual"] = rep.residual;
  out["iterations"] = rep.iterations;
  if (oracle_delta_value) out["oracle_delta"] = *oracle_delta_value;
  if (trace_path) out["trace_path"] = *trace_path;
  if (!rep.notes.empty()) out["notes"] = rep.notes;
  return out;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "step,alpha,eig_estimate,hilbert_step,residual,min_eig\n";
  for (const auto& r : rows) {
    out << r.step << ',' << format_g17(r.alpha) << ','
        << format_g17(r.eig_estimate) << ',' << format_g17(r.hilbert_step)
        << ',' << format_g17(r.residual) << ',' << format_g17(r.min_eig)
        << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "alpha,eigenvalue\n";
  for (const auto& pt : points) {
    out << format_g17(pt.alpha) << ',';
    if (pt.eigenvalue) {
      out << format_g17(*pt.eigenvalue);
    } else {
      out << "nan";
    }
    out << '\n';
  }
}

}  // namespace coneflow
