#include "coneflow/poslqr.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "coneflow/sysprops.hpp"

namespace coneflow {

namespace {

double resid_bellman(const BellmanProblem& prob, const Eigen::VectorXd& p) {
  Eigen::VectorXd rhs = prob.s + prob.A.transpose() * p -
                        prob.E.transpose() *
                            (prob.r + prob.B.transpose() * p).cwiseAbs();
  return (p - rhs).lpNorm<Eigen::Infinity>();
}

bool h1_witness_ok(const BellmanProblem& prob, const Eigen::MatrixXd& L) {
  if (L.rows() != prob.m() || L.cols() != prob.n()) return false;
  if (((L.cwiseAbs() - prob.E).array() > kMemTol).any()) return false;
  return stability(prob.A - prob.B * L, StabilityMode::Schur);
}

}  // namespace

BellmanProblem::BellmanProblem(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in,
                               Eigen::MatrixXd E_in, Eigen::VectorXd s_in,
                               Eigen::VectorXd r_in,
                               std::optional<Eigen::MatrixXd> L_cert_in)
    : A(std::move(A_in)),
      B(std::move(B_in)),
      E(std::move(E_in)),
      s(std::move(s_in)),
      r(std::move(r_in)),
      L_cert(std::move(L_cert_in)) {
  const int nn = static_cast<int>(A.rows());
  const int mm = static_cast<int>(B.cols());
  if (A.cols() != nn || nn < 1) {
    fail(ErrorCode::DimensionMismatch, "A must be square");
  }
  if (B.rows() != nn || mm < 1) {
    fail(ErrorCode::DimensionMismatch, "B must be n-by-m");
  }
  if (E.rows() != mm || E.cols() != nn) {
    fail(ErrorCode::DimensionMismatch, "E must be m-by-n");
  }
  if (s.size() != nn || r.size() != mm) {
    fail(ErrorCode::DimensionMismatch, "s must have length n, r length m");
  }
  if (L_cert && (L_cert->rows() != mm || L_cert->cols() != nn)) {
    fail(ErrorCode::DimensionMismatch, "L_cert must be m-by-n");
  }
  if (E.minCoeff() < -kMemTol) {
    fail(ErrorCode::AssumptionViolated,
         "standing assumption violated: E must be entrywise nonnegative");
  }
  if (((E.transpose() * r - s).array() > kMemTol).any()) {
    fail(ErrorCode::AssumptionViolated,
         "standing assumption violated: s >= E^T r must hold entrywise");
  }
  if (((B.cwiseAbs() * E - A).array() > kMemTol).any()) {
    fail(ErrorCode::AssumptionViolated,
         "standing assumption violated: A >= |B| E must hold entrywise");
  }
}

Eigen::VectorXd bellman_map(const BellmanProblem& prob, double alpha,
                            const Eigen::VectorXd& p) {
  if (!(alpha > 0)) {
    fail(ErrorCode::DimensionMismatch, "alpha must be positive");
  }
  if (p.size() != prob.n()) {
    fail(ErrorCode::DimensionMismatch, "p must have length n");
  }
  const double mass = alpha * p.sum();
  return mass * prob.s + prob.A.transpose() * p -
         prob.E.transpose() * (mass * prob.r + prob.B.transpose() * p).cwiseAbs();
}

AssumptionReport check_assumptions(const BellmanProblem& prob) {
  AssumptionReport rep;
  rep.standing = prob.E.minCoeff() >= -kMemTol &&
                 ((prob.s - prob.E.transpose() * prob.r).array() >= -kMemTol).all() &&
                 ((prob.A - prob.B.cwiseAbs() * prob.E).array() >= -kMemTol).all();

  // H2 is a finite computation: strict entrywise positivity of
  // (s - E^T |r|)^T sum_{i<n} (A - |B| E)^i.
  Eigen::MatrixXd M = prob.A - prob.B.cwiseAbs() * prob.E;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(prob.n(), prob.n());
  Eigen::MatrixXd series = Eigen::MatrixXd::Zero(prob.n(), prob.n());
  for (int i = 0; i < prob.n(); ++i) {
    series += power;
    power = power * M;
  }
  Eigen::RowVectorXd w =
      (prob.s - prob.E.transpose() * prob.r.cwiseAbs()).transpose() * series;
  rep.h2 = (w.array() > kRankTol).all();

  const Eigen::MatrixXd L_zero = Eigen::MatrixXd::Zero(prob.m(), prob.n());
  const Eigen::MatrixXd L_aligned =
      prob.E.cwiseProduct(prob.B.transpose().cwiseSign());
  const bool heuristic_found =
      h1_witness_ok(prob, L_zero) || h1_witness_ok(prob, L_aligned);
  if (prob.L_cert) {
    if (h1_witness_ok(prob, *prob.L_cert)) {
      rep.h1 = H1Status::Yes;
    } else {
      rep.h1 = heuristic_found ? H1Status::Yes : H1Status::No;
    }
  } else {
    rep.h1 = heuristic_found ? H1Status::Yes : H1Status::Unknown;
  }
  return rep;
}

ConeOperator bellman_operator(const BellmanProblem& prob, double alpha) {
  if (!(alpha > 0)) {
    fail(ErrorCode::DimensionMismatch, "alpha must be positive");
  }
  ConeOperator op;
  op.cone = {ConeKind::Orthant, prob.n()};
  op.discrete = true;
  op.apply = [prob, alpha](const ConePoint& x) {
    return ConePoint::orthant(bellman_map(prob, alpha, x.vec()));
  };
  return op;
}

SolveReport solve_positive_bellman(const BellmanProblem& prob,
                                   const SolveOptions& opts) {
  AssumptionReport gate = check_assumptions(prob);
  if (!gate.standing) {
    fail(ErrorCode::AssumptionViolated, "standing assumptions do not hold");
  }
  if (gate.h1 != H1Status::Yes) {
    fail(ErrorCode::AssumptionViolated,
         std::string("assumption H1 not certified (") +
             (gate.h1 == H1Status::No ? "certificate failed" :
                                        "no witness found") +
             "): no L with |L| <= E makes A - B L Schur stable");
  }
  if (!gate.h2) {
    fail(ErrorCode::AssumptionViolated,
         "assumption H2 fails: (s - E^T|r|)^T sum (A - |B|E)^i is not "
         "entrywise positive");
  }

  auto extract = [](const ConePoint& dir, double a) {
    const Eigen::VectorXd& x = dir.vec();
    return Eigen::VectorXd(x / (a * x.sum()));
  };

  CrossingOptions co;
  co.eig_tol = opts.eig_tol;
  co.max_expansions = opts.max_expansions;
  co.perron.hm_tol = opts.hm_tol;
  co.perron.res_tol = opts.res_tol;
  co.perron.max_iters = opts.max_iters;
  co.perron.window = 10;  // the map is only piecewise linear
  co.perron.record_trace = opts.record_trace;
  co.perron.observer = opts.observer;
  co.x0 = opts.x0;
  co.accept = [&](double a, const PerronResult& r) {
    return resid_bellman(prob, extract(r.direction, a)) <= opts.res_tol;
  };
  auto family = [prob](double a) { return bellman_operator(prob, a); };
  CrossingResult cr =
      find_alpha_crossing(family, 1.0, opts.alpha_bracket, co);

  SolveReport rep;
  Eigen::VectorXd p = extract(cr.result.direction, cr.alpha);
  rep.residual = resid_bellman(prob, p);
  rep.solution = std::move(p);
  rep.alpha = cr.alpha;
  rep.eigenvalue_at_alpha = cr.result.eigenvalue;
  rep.iterations = cr.total_iterations;
  rep.trace = std::move(cr.result.trace);
  return rep;
}

}  // namespace coneflow
