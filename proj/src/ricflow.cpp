#include "coneflow/ricflow.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <utility>

namespace coneflow {

namespace {

constexpr double kBlockCondLimit = 1e12;

double resid_riccati_dt(const RiccatiProblem& prob,
                        const Eigen::MatrixXd& CtC, const SymMatrix& P) {
  const Eigen::MatrixXd& A = prob.A;
  const Eigen::MatrixXd& B = prob.B;
  Eigen::MatrixXd G = prob.R.mat() + B.transpose() * P.mat() * B;
  Eigen::MatrixXd BtPA = B.transpose() * P.mat() * A;
  Eigen::MatrixXd M = A.transpose() * P.mat() * A -
                      BtPA.transpose() * G.llt().solve(BtPA) + CtC - P.mat();
  return M.norm();
}

double resid_riccati_ct(const RiccatiProblem& prob,
                        const Eigen::MatrixXd& CtC, const SymMatrix& P) {
  const Eigen::MatrixXd& A = prob.A;
  const Eigen::MatrixXd& B = prob.B;
  Eigen::MatrixXd G = A.transpose() * P.mat();
  Eigen::MatrixXd BtP = B.transpose() * P.mat();
  Eigen::MatrixXd M = G + G.transpose() -
                      BtP.transpose() * prob.R.mat().llt().solve(BtP) + CtC;
  return M.norm();
}

}  // namespace

RiccatiProblem::RiccatiProblem(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in,
                               SymMatrix R_in, Eigen::MatrixXd C_in,
                               TimeDomain time_in)
    : A(std::move(A_in)),
      B(std::move(B_in)),
      R(std::move(R_in)),
      C(std::move(C_in)),
      time(time_in) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    fail(ErrorCode::DimensionMismatch, "A must be square");
  }
  if (B.rows() != A.rows() || B.cols() < 1) {
    fail(ErrorCode::DimensionMismatch, "B must be n-by-m");
  }
  if (C.cols() != A.rows() || C.rows() < 1) {
    fail(ErrorCode::DimensionMismatch, "C must be p-by-n");
  }
  if (R.order() != B.cols()) {
    fail(ErrorCode::DimensionMismatch, "R must be m-by-m");
  }
  if (!(R.min_eigenvalue() > kIntTol)) {
    fail(ErrorCode::NotPositiveDefinite, "R must be positive definite");
  }
}

SymMatrix schur_shrink(const SymMatrix& X, const Eigen::MatrixXd& B,
                       const SymMatrix& R, double scale) {
  if (B.rows() != X.order() || R.order() != B.cols()) {
    fail(ErrorCode::DimensionMismatch, "schur_shrink dimension mismatch");
  }
  if (X.norm() == 0.0) return X;

  Eigen::MatrixXd G = scale * R.mat() + B.transpose() * X.mat() * B;
  G = 0.5 * (G + G.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0) || lmax / lmin > kBlockCondLimit) {
    fail(ErrorCode::SingularBlock,
         "shrink block scale*R + B^T X B is singular or too ill-conditioned");
  }
  Eigen::MatrixXd BtX = B.transpose() * X.mat();
  Eigen::MatrixXd S = X.mat() - BtX.transpose() * G.llt().solve(BtX);
  S = 0.5 * (S + S.transpose());
  return SymMatrix(S);
}

SymMatrix riccati_dt_map(const RiccatiProblem& prob, double alpha,
                         const SymMatrix& X) {
  if (!(alpha > 0)) {
    fail(ErrorCode::DimensionMismatch, "alpha must be positive");
  }
  if (X.order() != prob.n()) {
    fail(ErrorCode::DimensionMismatch, "X order mismatch");
  }
  const double scale = alpha * X.trace();
  SymMatrix S = schur_shrink(X, prob.B, prob.R, scale);
  Eigen::MatrixXd M = prob.A.transpose() * S.mat() * prob.A +
                      scale * (prob.C.transpose() * prob.C);
  M = 0.5 * (M + M.transpose());
  return SymMatrix(M);
}

SymMatrix riccati_ct_rhs(const RiccatiProblem& prob, double alpha,
                         const SymMatrix& P) {
  if (!(alpha > 0)) {
    fail(ErrorCode::DimensionMismatch, "alpha must be positive");
  }
  if (P.order() != prob.n()) {
    fail(ErrorCode::DimensionMismatch, "P order mismatch");
  }
  const double tr = P.trace();
  if (!(tr > kMemTol)) {
    fail(ErrorCode::ZeroTrace, "riccati_ct_rhs needs tr(P) > 0");
  }
  Eigen::MatrixXd G = alpha * (prob.A.transpose() * P.mat());
  Eigen::MatrixXd BtP = prob.B.transpose() * P.mat();
  Eigen::MatrixXd quad = BtP.transpose() * prob.R.mat().llt().solve(BtP);
  quad = 0.5 * (quad + quad.transpose());
  Eigen::MatrixXd M = G + G.transpose() - quad / tr +
                      (alpha * alpha * tr) * (prob.C.transpose() * prob.C);
  return SymMatrix(M);
}

ConeOperator riccati_dt_operator(const RiccatiProblem& prob, double alpha) {
  ConeOperator op;
  op.cone = {ConeKind::Psd, prob.n()};
  op.discrete = true;
  op.apply = [prob, alpha](const ConePoint& x) {
    return ConePoint::psd(riccati_dt_map(prob, alpha, x.sym()));
  };
  return op;
}

ConeOperator riccati_ct_operator(const RiccatiProblem& prob, double alpha) {
  ConeOperator op;
  op.cone = {ConeKind::Psd, prob.n()};
  op.discrete = false;
  Eigen::MatrixXd G =
      prob.B * prob.R.mat().llt().solve(prob.B.transpose());
  const double cnorm = (prob.C.transpose() * prob.C).norm();
  const double rate =
      2.0 * alpha * prob.A.norm() + G.norm() + alpha * alpha * cnorm;
  op.step = 0.5 / (1.0 + rate);
  op.apply = [prob, alpha](const ConePoint& x) {
    return ConePoint::psd(riccati_ct_rhs(prob, alpha, x.sym()));
  };
  return op;
}

SolveReport solve_riccati_dt(const RiccatiProblem& prob,
                             const SolveOptions& opts) {
  if (!controllability_ok(prob.A, prob.B)) {
    fail(ErrorCode::NotControllable, "(A, B) is not controllable");
  }
  if (!observability_ok(prob.A, prob.C)) {
    fail(ErrorCode::NotObservable, "(A, C) is not observable");
  }
  Eigen::MatrixXd CtC = prob.C.transpose() * prob.C;
  const double scale = std::max(1.0, CtC.norm());

  auto extract = [](const ConePoint& dir, double a) {
    const SymMatrix& X = dir.sym();
    return X.scaled(1.0 / (a * X.trace()));
  };

  CrossingOptions co;
  co.eig_tol = opts.eig_tol;
  co.max_expansions = opts.max_expansions;
  co.perron.hm_tol = opts.hm_tol;
  co.perron.res_tol = opts.res_tol;
  co.perron.max_iters = opts.max_iters;
  // Convergence is only asymptotic for the Riccati map: demand a settled
  // window rather than a single small step.
  co.perron.window = 10;
  co.perron.record_trace = opts.record_trace;
  co.perron.observer = opts.observer;
  co.x0 = opts.x0;
  co.accept = [&](double a, const PerronResult& r) {
    return resid_riccati_dt(prob, CtC, extract(r.direction, a)) <=
           opts.res_tol * scale;
  };
  auto family = [prob](double a) { return riccati_dt_operator(prob, a); };
  CrossingResult cr =
      find_alpha_crossing(family, 1.0, opts.alpha_bracket, co);

  SolveReport rep;
  SymMatrix P = extract(cr.result.direction, cr.alpha);
  rep.residual = resid_riccati_dt(prob, CtC, P);
  rep.solution = std::move(P);
  rep.alpha = cr.alpha;
  rep.eigenvalue_at_alpha = cr.result.eigenvalue;
  rep.iterations = cr.total_iterations;
  rep.trace = std::move(cr.result.trace);
  return rep;
}

SolveReport solve_riccati_ct(const RiccatiProblem& prob,
                             const SolveOptions& opts) {
  if (!controllability_ok(prob.A, prob.B)) {
    fail(ErrorCode::NotControllable, "(A, B) is not controllable");
  }
  if (!observability_ok(prob.A, prob.C)) {
    fail(ErrorCode::NotObservable, "(A, C) is not observable");
  }
  Eigen::MatrixXd CtC = prob.C.transpose() * prob.C;
  const double scale = std::max(1.0, CtC.norm());

  // The mu = 0 identity divided by alpha*tr(X*) reproduces the equation with
  // P = X*/(alpha tr X*); the alpha^2 scaling is kept as a fallback and the
  // residual arbitrates.
  auto extract = [&](const ConePoint& dir, double a,
                     std::string* which) -> std::pair<SymMatrix, double> {
    const SymMatrix& X = dir.sym();
    SymMatrix P1 = X.scaled(1.0 / (a * X.trace()));
    const double r1 = resid_riccati_ct(prob, CtC, P1);
    if (r1 <= opts.res_tol * scale) {
      if (which) *which = "extraction=alpha*trace";
      return {P1, r1};
    }
    SymMatrix P2 = X.scaled(1.0 / (a * a * X.trace()));
    const double r2 = resid_riccati_ct(prob, CtC, P2);
    if (r2 < r1) {
      if (which) *which = "extraction=alpha^2*trace";
      return {P2, r2};
    }
    if (which) *which = "extraction=alpha*trace";
    return {P1, r1};
  };

  CrossingOptions co;
  co.eig_tol = opts.eig_tol;
  co.max_expansions = opts.max_expansions;
  co.perron.hm_tol = opts.hm_tol;
  co.perron.res_tol = opts.res_tol;
  co.perron.max_iters = opts.max_iters;
  co.perron.window = 10;
  co.perron.record_trace = opts.record_trace;
  co.perron.observer = opts.observer;
  co.x0 = opts.x0;
  co.accept = [&](double a, const PerronResult& r) {
    return extract(r.direction, a, nullptr).second <= opts.res_tol * scale;
  };
  auto family = [prob](double a) { return riccati_ct_operator(prob, a); };
  CrossingResult cr =
      find_alpha_crossing(family, 0.0, opts.alpha_bracket, co);

  SolveReport rep;
  auto [P, resid] = extract(cr.result.direction, cr.alpha, &rep.notes);
  rep.residual = resid;
  rep.solution = std::move(P);
  rep.alpha = cr.alpha;
  rep.eigenvalue_at_alpha = cr.result.eigenvalue;
  rep.iterations = cr.total_iterations;
  rep.trace = std::move(cr.result.trace);
  return rep;
}

}  // namespace coneflow
