#include "coneflow/matcone.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace coneflow {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    fail(ErrorCode::DimensionMismatch, "SymMatrix requires a square matrix");
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!(asym <= kSymTol * scale)) {
    fail(ErrorCode::DimensionMismatch,
         "matrix is asymmetric beyond tolerance and cannot be symmetrized");
  }
  mat_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::Identity(int n) {
  return SymMatrix(Eigen::MatrixXd::Identity(n, n), Trusted{});
}

SymMatrix SymMatrix::Zero(int n) {
  return SymMatrix(Eigen::MatrixXd::Zero(n, n), Trusted{});
}

double SymMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::VectorXd SymMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

SymMatrix SymMatrix::scaled(double c) const {
  return SymMatrix(c * mat_, Trusted{});
}

SymMatrix SymMatrix::plus_scaled(const SymMatrix& other, double c) const {
  if (other.order() != order()) {
    fail(ErrorCode::DimensionMismatch, "SymMatrix order mismatch");
  }
  return SymMatrix(mat_ + c * other.mat_, Trusted{});
}

ConePoint ConePoint::orthant(Eigen::VectorXd v) {
  if (v.size() < 1) {
    fail(ErrorCode::DimensionMismatch, "orthant point needs dimension >= 1");
  }
  ConeSpec spec{ConeKind::Orthant, static_cast<int>(v.size())};
  return ConePoint(spec, std::move(v));
}

ConePoint ConePoint::psd(SymMatrix m) {
  ConeSpec spec{ConeKind::Psd, m.order()};
  return ConePoint(spec, std::move(m));
}

const Eigen::VectorXd& ConePoint::vec() const {
  if (cone_.kind != ConeKind::Orthant) {
    fail(ErrorCode::DimensionMismatch, "point is not an orthant point");
  }
  return std::get<Eigen::VectorXd>(payload_);
}

const SymMatrix& ConePoint::sym() const {
  if (cone_.kind != ConeKind::Psd) {
    fail(ErrorCode::DimensionMismatch, "point is not a PSD point");
  }
  return std::get<SymMatrix>(payload_);
}

double ConePoint::norm() const {
  return cone_.kind == ConeKind::Orthant ? vec().norm() : sym().norm();
}

double ConePoint::normalizer() const {
  return cone_.kind == ConeKind::Orthant ? vec().sum() : sym().trace();
}

double ConePoint::min_component() const {
  return cone_.kind == ConeKind::Orthant ? vec().minCoeff()
                                         : sym().min_eigenvalue();
}

ConePoint ConePoint::scaled(double c) const {
  if (cone_.kind == ConeKind::Orthant) {
    return orthant(c * vec());
  }
  return psd(sym().scaled(c));
}

ConePoint add_scaled(const ConePoint& x, const ConePoint& y, double c) {
  if (!(x.cone() == y.cone())) {
    fail(ErrorCode::DimensionMismatch, "cone mismatch in add_scaled");
  }
  if (x.kind() == ConeKind::Orthant) {
    return ConePoint::orthant(x.vec() + c * y.vec());
  }
  return ConePoint::psd(x.sym().plus_scaled(y.sym(), c));
}

bool is_member(const ConePoint& p) { return p.min_component() >= -kMemTol; }

bool is_interior(const ConePoint& p) { return p.min_component() > kIntTol; }

std::pair<double, double> gen_eig_extremes(const SymMatrix& X,
                                           const SymMatrix& Y) {
  if (X.order() != Y.order()) {
    fail(ErrorCode::DimensionMismatch, "pencil orders differ");
  }
  if (!(X.min_eigenvalue() > kIntTol) || !(Y.min_eigenvalue() > kIntTol)) {
    fail(ErrorCode::NotPositiveDefinite,
         "gen_eig_extremes requires positive definite inputs");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(Y.mat());
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::NotPositiveDefinite, "Cholesky factorization of Y failed");
  }
  // Whiten: W = L^-1 X L^-T has the pencil eigenvalues as ordinary ones.
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd Z =
      L.triangularView<Eigen::Lower>().solve(X.mat());
  Eigen::MatrixXd W =
      L.triangularView<Eigen::Lower>().solve(Z.transpose()).transpose();
  W = 0.5 * (W + W.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

double hilbert_distance(const ConePoint& x, const ConePoint& y) {
  if (!(x.cone() == y.cone())) {
    fail(ErrorCode::DimensionMismatch, "cone mismatch in hilbert_distance");
  }
  if (!is_interior(x) || !is_interior(y)) {
    fail(ErrorCode::BoundaryPoint,
         "hilbert_distance to a boundary point is infinite");
  }
  if (x.kind() == ConeKind::Orthant) {
    const Eigen::ArrayXd r = x.vec().array() / y.vec().array();
    return std::log(r.maxCoeff()) - std::log(r.minCoeff());
  }
  const auto [lmin, lmax] = gen_eig_extremes(x.sym(), y.sym());
  return std::log(lmax) - std::log(lmin);
}

}  // namespace coneflow
