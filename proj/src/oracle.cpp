#include "coneflow/oracle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>

namespace coneflow::oracle {

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) {
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return K;
}

Eigen::VectorXd vec(const Eigen::MatrixXd& M) {
  return Eigen::Map<const Eigen::VectorXd>(M.data(), M.size());
}

SymMatrix unvec_sym(const Eigen::VectorXd& v, int n) {
  Eigen::MatrixXd M = Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
  M = 0.5 * (M + M.transpose());
  return SymMatrix(M);
}

SymMatrix kron_solve(const Eigen::MatrixXd& M, const Eigen::MatrixXd& CtC,
                     int n) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) {
    fail(ErrorCode::SingularSystem,
         "vectorized Lyapunov system is singular (eigenvalue-sum resonance)");
  }
  return unvec_sym(lu.solve(-vec(CtC)), n);
}

// sum_ij M_ij^2, accumulated entrywise.
double frob(const Eigen::MatrixXd& M) {
  double acc = 0.0;
  for (int j = 0; j < M.cols(); ++j) {
    for (int i = 0; i < M.rows(); ++i) {
      acc += M(i, j) * M(i, j);
    }
  }
  return std::sqrt(acc);
}

Eigen::MatrixXd care_rhs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& G,
                         const Eigen::MatrixXd& CtC, const Eigen::MatrixXd& P) {
  Eigen::MatrixXd M = A.transpose() * P + P * A - P * G * P + CtC;
  return 0.5 * (M + M.transpose());
}

}  // namespace

SymMatrix lyap_kron_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                          TimeDomain mode) {
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd CtC = C.transpose() * C;
  Eigen::MatrixXd M;
  if (mode == TimeDomain::CT) {
    M = kron(I, A.transpose()) + kron(A.transpose(), I);
  } else {
    M = kron(A.transpose(), A.transpose()) -
        Eigen::MatrixXd::Identity(n * n, n * n);
  }
  return kron_solve(M, CtC, n);
}

SymMatrix lyap_kron_solve_stochastic(const Eigen::MatrixXd& A,
                                     const std::vector<Eigen::MatrixXd>& A_list,
                                     const Eigen::MatrixXd& C) {
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd M = kron(I, A.transpose()) + kron(A.transpose(), I);
  for (const auto& Ai : A_list) {
    M += kron(Ai.transpose(), Ai.transpose());
  }
  return kron_solve(M, C.transpose() * C, n);
}

SymMatrix lyap_kron_solve_weighted(const Eigen::MatrixXd& A,
                                   const Eigen::MatrixXd& E,
                                   const Eigen::MatrixXd& C) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd M =
      kron(E.transpose(), A.transpose()) + kron(A.transpose(), E.transpose());
  return kron_solve(M, C.transpose() * C, n);
}

Eigen::VectorXd positive_linear_solve(const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& c) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) {
    fail(ErrorCode::SingularSystem, "A is singular");
  }
  return lu.solve(-c);
}

SymMatrix riccati_dt_value_iter(const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& B, const SymMatrix& R,
                                const Eigen::MatrixXd& C, double tol,
                                int max_iters) {
  const Eigen::MatrixXd CtC = C.transpose() * C;
  Eigen::MatrixXd P = CtC;
  for (int k = 0; k < max_iters; ++k) {
    Eigen::MatrixXd G = R.mat() + B.transpose() * P * B;
    Eigen::MatrixXd BtPA = B.transpose() * P * A;
    Eigen::MatrixXd next =
        A.transpose() * P * A - BtPA.transpose() * G.llt().solve(BtPA) + CtC;
    next = 0.5 * (next + next.transpose());
    const double diff = frob(next - P);
    P = next;
    if (diff < tol) return SymMatrix(P);
  }
  fail(ErrorCode::MaxIterations, "value iteration did not converge");
}

SymMatrix riccati_ct_oracle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            const SymMatrix& R, const Eigen::MatrixXd& C,
                            double tol, int max_steps) {
  const Eigen::MatrixXd CtC = C.transpose() * C;
  const Eigen::MatrixXd G = B * R.mat().llt().solve(B.transpose());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(A.rows(), A.cols());
  for (int k = 0; k < max_steps; ++k) {
    Eigen::MatrixXd k1 = care_rhs(A, G, CtC, P);
    if (frob(k1) < tol) return SymMatrix(P);
    const double h = 0.4 / (1.0 + 2.0 * A.norm() + 2.0 * G.norm() * P.norm());
    Eigen::MatrixXd k2 = care_rhs(A, G, CtC, P + 0.5 * h * k1);
    Eigen::MatrixXd k3 = care_rhs(A, G, CtC, P + 0.5 * h * k2);
    Eigen::MatrixXd k4 = care_rhs(A, G, CtC, P + h * k3);
    P += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    P = 0.5 * (P + P.transpose());
  }
  fail(ErrorCode::MaxIterations,
       "differential Riccati integration found no steady state in budget");
}

Eigen::VectorXd bellman_iter_oracle(const BellmanProblem& prob, double tol,
                                    int max_iters) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(prob.n());
  for (int k = 0; k < max_iters; ++k) {
    Eigen::VectorXd next =
        prob.s + prob.A.transpose() * p -
        prob.E.transpose() * (prob.r + prob.B.transpose() * p).cwiseAbs();
    const double diff = (next - p).lpNorm<Eigen::Infinity>();
    p = next;
    if (diff < tol) return p;
  }
  fail(ErrorCode::MaxIterations, "Bellman fixed-point iteration stalled");
}

Eigen::MatrixXd lyap_operator_matrix(const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& C, double alpha,
                                     TimeDomain mode) {
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd M;
  if (mode == TimeDomain::CT) {
    M = kron(I, A.transpose()) + kron(A.transpose(), I);
  } else {
    M = kron(A.transpose(), A.transpose());
  }
  // tr(X) = vec(I)^T vec(X), so the trace coupling is a rank-one update.
  M += alpha * vec(C.transpose() * C) * vec(I).transpose();
  return M;
}

double residual_lyap_ct(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                        const SymMatrix& P) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        acc += A(k, i) * P.mat()(k, j) + P.mat()(i, k) * A(k, j);
      }
      for (int k = 0; k < C.rows(); ++k) {
        acc += C(k, i) * C(k, j);
      }
      M(i, j) = acc;
    }
  }
  return frob(M);
}

double residual_lyap_dt(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                        const SymMatrix& Q) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd QA(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += Q.mat()(i, k) * A(k, j);
      QA(i, j) = acc;
    }
  }
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = -Q.mat()(i, j);
      for (int k = 0; k < n; ++k) acc += A(k, i) * QA(k, j);
      for (int k = 0; k < C.rows(); ++k) acc += C(k, i) * C(k, j);
      M(i, j) = acc;
    }
  }
  return frob(M);
}

double residual_lyap_stochastic(const Eigen::MatrixXd& A,
                                const std::vector<Eigen::MatrixXd>& A_list,
                                const Eigen::MatrixXd& C, const SymMatrix& P) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        acc += A(k, i) * P.mat()(k, j) + P.mat()(i, k) * A(k, j);
      }
      for (int k = 0; k < C.rows(); ++k) acc += C(k, i) * C(k, j);
      M(i, j) = acc;
    }
  }
  for (const auto& Ai : A_list) {
    M += Ai.transpose() * P.mat() * Ai;
  }
  return frob(M);
}

double residual_lyap_weighted(const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& E,
                              const Eigen::MatrixXd& C, const SymMatrix& P) {
  Eigen::MatrixXd PE = P.mat() * E;
  Eigen::MatrixXd M = A.transpose() * PE + PE.transpose() * A +
                      C.transpose() * C;
  return frob(M);
}

double residual_riccati_dt(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const SymMatrix& R, const Eigen::MatrixXd& C,
                           const SymMatrix& P) {
  Eigen::MatrixXd G = R.mat() + B.transpose() * P.mat() * B;
  Eigen::MatrixXd BtPA = B.transpose() * P.mat() * A;
  Eigen::MatrixXd M = A.transpose() * P.mat() * A -
                      BtPA.transpose() * G.partialPivLu().solve(BtPA) +
                      C.transpose() * C - P.mat();
  return frob(M);
}

double residual_riccati_ct(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const SymMatrix& R, const Eigen::MatrixXd& C,
                           const SymMatrix& P) {
  Eigen::MatrixXd BtP = B.transpose() * P.mat();
  Eigen::MatrixXd M = A.transpose() * P.mat() + P.mat() * A -
                      BtP.transpose() * R.mat().partialPivLu().solve(BtP) +
                      C.transpose() * C;
  return frob(M);
}

double residual_positive_linear(const Eigen::MatrixXd& A,
                                const Eigen::VectorXd& c,
                                const Eigen::VectorXd& p) {
  double worst = 0.0;
  for (int i = 0; i < A.rows(); ++i) {
    double acc = c(i);
    for (int j = 0; j < A.cols(); ++j) acc += A(i, j) * p(j);
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

double residual_bellman(const BellmanProblem& prob, const Eigen::VectorXd& p) {
  Eigen::VectorXd inner = prob.r + prob.B.transpose() * p;
  Eigen::VectorXd rhs =
      prob.s + prob.A.transpose() * p - prob.E.transpose() * inner.cwiseAbs();
  double worst = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    worst = std::max(worst, std::abs(p(i) - rhs(i)));
  }
  return worst;
}

}  // namespace coneflow::oracle
