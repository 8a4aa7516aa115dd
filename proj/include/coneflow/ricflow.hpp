#pragma once

#include <Eigen/Dense>

#include "coneflow/lyapflow.hpp"
#include "coneflow/matcone.hpp"
#include "coneflow/report.hpp"
#include "coneflow/sysprops.hpp"

namespace coneflow {

// One algebraic Riccati instance. R must be symmetric positive definite.
struct RiccatiProblem {
  RiccatiProblem(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in, SymMatrix R_in,
                 Eigen::MatrixXd C_in, TimeDomain time_in);

  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  SymMatrix R;
  Eigen::MatrixXd C;
  TimeDomain time = TimeDomain::DT;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
};

// S(X) = X - X B (scale R + B^T X B)^-1 B^T X. Positive semidefinite,
// kernel-preserving and order-preserving in X; S(X) <= X.
SymMatrix schur_shrink(const SymMatrix& X, const Eigen::MatrixXd& B,
                       const SymMatrix& R, double scale);

// F(X) = A^T S(X) A + alpha tr(X) C^T C with scale = alpha tr(X); the
// homogenized one-step Riccati map (continuous, homogeneous,
// order-preserving, concave).
SymMatrix riccati_dt_map(const RiccatiProblem& prob, double alpha,
                         const SymMatrix& X);

// Right-hand side of the homogenized flow
// P' = alpha A^T P + alpha P A - P B R^-1 B^T P / tr(P)
//      + alpha^2 tr(P) C^T C.
SymMatrix riccati_ct_rhs(const RiccatiProblem& prob, double alpha,
                         const SymMatrix& P);

ConeOperator riccati_dt_operator(const RiccatiProblem& prob, double alpha);
ConeOperator riccati_ct_operator(const RiccatiProblem& prob, double alpha);

// P = A^T P A - A^T P B (R + B^T P B)^-1 B^T P A + C^T C.
SolveReport solve_riccati_dt(const RiccatiProblem& prob,
                             const SolveOptions& opts = {});

// A^T P + P A - P B R^-1 B^T P + C^T C = 0.
SolveReport solve_riccati_ct(const RiccatiProblem& prob,
                             const SolveOptions& opts = {});

}  // namespace coneflow
