#pragma once

#include <Eigen/Dense>

#include <variant>
#include <vector>

#include "coneflow/matcone.hpp"
#include "coneflow/poslqr.hpp"
#include "coneflow/sysprops.hpp"

// Independent classical solvers used only to cross-validate the flow-based
// solvers. None of these share a code path with the flow side, and the
// residual routines below are re-derived entrywise on purpose.
namespace coneflow::oracle {

enum class OracleMethod {
  KronCT,
  KronDT,
  KronStochastic,
  KronWeighted,
  LinearSolve,
  ValueIteration,
  RiccatiIntegration,
  FixedPointIteration,
};

struct OracleResult {
  std::variant<Eigen::VectorXd, SymMatrix> solution;
  OracleMethod method = OracleMethod::KronCT;
  int iterations_or_size = 0;
};

// Dense vectorized (Kronecker) linear solve of the CT/DT Lyapunov equation.
SymMatrix lyap_kron_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                          TimeDomain mode);

SymMatrix lyap_kron_solve_stochastic(const Eigen::MatrixXd& A,
                                     const std::vector<Eigen::MatrixXd>& A_list,
                                     const Eigen::MatrixXd& C);

SymMatrix lyap_kron_solve_weighted(const Eigen::MatrixXd& A,
                                   const Eigen::MatrixXd& E,
                                   const Eigen::MatrixXd& C);

// Direct solve of A p + c = 0.
Eigen::VectorXd positive_linear_solve(const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& c);

// Classical (non-homogenized) value iteration from P0 = C^T C.
SymMatrix riccati_dt_value_iter(const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& B, const SymMatrix& R,
                                const Eigen::MatrixXd& C, double tol,
                                int max_iters = 1000000);

// Integrates the classical differential Riccati equation from P(0) = 0 until
// its right-hand side (which equals the CT-ARE residual) drops below tol.
SymMatrix riccati_ct_oracle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            const SymMatrix& R, const Eigen::MatrixXd& C,
                            double tol, int max_steps = 4000000);

// Direct fixed-point iteration p <- s + A^T p - E^T |r + B^T p| from p0 = 0.
Eigen::VectorXd bellman_iter_oracle(const BellmanProblem& prob, double tol,
                                    int max_iters = 1000000);

// Vectorized n^2-by-n^2 matrix of the linear Lyapunov operator (flow
// generator for CT, one-step map for DT) at a given alpha; its dominant
// eigenpair is the reference for the Perron iteration.
Eigen::MatrixXd lyap_operator_matrix(const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& C, double alpha,
                                     TimeDomain mode);

// Entrywise re-derived residuals of the defining equations.
double residual_lyap_ct(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                        const SymMatrix& P);
double residual_lyap_dt(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                        const SymMatrix& Q);
double residual_lyap_stochastic(const Eigen::MatrixXd& A,
                                const std::vector<Eigen::MatrixXd>& A_list,
                                const Eigen::MatrixXd& C, const SymMatrix& P);
double residual_lyap_weighted(const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& E,
                              const Eigen::MatrixXd& C, const SymMatrix& P);
double residual_riccati_dt(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const SymMatrix& R, const Eigen::MatrixXd& C,
                           const SymMatrix& P);
double residual_riccati_ct(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const SymMatrix& R, const Eigen::MatrixXd& C,
                           const SymMatrix& P);
double residual_positive_linear(const Eigen::MatrixXd& A,
                                const Eigen::VectorXd& c,
                                const Eigen::VectorXd& p);
double residual_bellman(const BellmanProblem& prob, const Eigen::VectorXd& p);

}  // namespace coneflow::oracle
