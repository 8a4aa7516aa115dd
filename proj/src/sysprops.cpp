#include "coneflow/sysprops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace coneflow {

namespace {

bool full_rank(const Eigen::MatrixXd& M, int n) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return false;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankTol * sv(0)) ++rank;
  }
  return rank == n;
}

}  // namespace

bool observability_ok(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || C.cols() != n || C.rows() < 1) {
    fail(ErrorCode::DimensionMismatch,
         "observability test needs A n-by-n and C p-by-n");
  }
  const int p = static_cast<int>(C.rows());
  Eigen::MatrixXd stack(p * n, n);
  Eigen::MatrixXd block = C;
  for (int k = 0; k < n; ++k) {
    stack.middleRows(k * p, p) = block;
    block = block * A;
  }
  return full_rank(stack, n);
}

bool controllability_ok(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || B.rows() != n || B.cols() < 1) {
    fail(ErrorCode::DimensionMismatch,
         "controllability test needs A n-by-n and B n-by-m");
  }
  const int m = static_cast<int>(B.cols());
  Eigen::MatrixXd stack(n, m * n);
  Eigen::MatrixXd block = B;
  for (int k = 0; k < n; ++k) {
    stack.middleCols(k * m, m) = block;
    block = A * block;
  }
  return full_rank(stack, n);
}

bool stability(const Eigen::MatrixXd& A, StabilityMode mode) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    fail(ErrorCode::DimensionMismatch, "stability test needs a square matrix");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
  if (mode == StabilityMode::Hurwitz) {
    return es.eigenvalues().real().maxCoeff() < -kStabTol;
  }
  return es.eigenvalues().cwiseAbs().maxCoeff() < 1.0 - kStabTol;
}

}  // namespace coneflow
