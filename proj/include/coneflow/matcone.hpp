#pragma once

#include <Eigen/Dense>

#include <utility>
#include <variant>

#include "coneflow/errors.hpp"

namespace coneflow {

// Numeric policy shared across the suite.
inline constexpr double kSymTol = 1e-12;  // max asymmetry accepted before symmetrization
inline constexpr double kMemTol = 1e-10;  // cone membership slack
inline constexpr double kIntTol = 1e-10;  // interiority threshold

enum class ConeKind { Orthant, Psd };

// Ambient cone: the nonnegative orthant of R^n or the PSD matrices of order n.
struct ConeSpec {
  ConeKind kind = ConeKind::Orthant;
  int dim = 1;

  friend bool operator==(const ConeSpec&, const ConeSpec&) = default;
};

// Dense real symmetric matrix, the state of every matrix flow. Construction
// replaces M by (M + M^T)/2 so rounding drift cannot accumulate asymmetry;
// inputs asymmetric beyond kSymTol (relative) are rejected outright.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix Identity(int n);
  static SymMatrix Zero(int n);

  int order() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& mat() const { return mat_; }

  double trace() const { return mat_.trace(); }
  double norm() const { return mat_.norm(); }  // Frobenius
  double min_eigenvalue() const;
  Eigen::VectorXd eigenvalues() const;  // ascending

  SymMatrix scaled(double c) const;
  // *this + c * other; stays exactly symmetric, no re-check needed.
  SymMatrix plus_scaled(const SymMatrix& other, double c) const;

 private:
  struct Trusted {};
  SymMatrix(Eigen::MatrixXd m, Trusted) : mat_(std::move(m)) {}

  Eigen::MatrixXd mat_;
};

// A point of one of the two cones: a vector (Orthant) or a SymMatrix (Psd).
class ConePoint {
 public:
  static ConePoint orthant(Eigen::VectorXd v);
  static ConePoint psd(SymMatrix m);

  const ConeSpec& cone() const { return cone_; }
  ConeKind kind() const { return cone_.kind; }
  int dim() const { return cone_.dim; }

  const Eigen::VectorXd& vec() const;  // Orthant payload
  const SymMatrix& sym() const;        // Psd payload

  double norm() const;        // 2-norm / Frobenius norm
  double normalizer() const;  // coordinate sum (Orthant) / trace (Psd)
  // Minimum entry (Orthant) or minimum eigenvalue (Psd).
  double min_component() const;

  ConePoint scaled(double c) const;

 private:
  ConePoint(ConeSpec spec, std::variant<Eigen::VectorXd, SymMatrix> payload)
      : cone_(spec), payload_(std::move(payload)) {}

  ConeSpec cone_;
  std::variant<Eigen::VectorXd, SymMatrix> payload_;
};

// x + c * y (cones must match).
ConePoint add_scaled(const ConePoint& x, const ConePoint& y, double c);

// Cone membership within the kMemTol slack.
bool is_member(const ConePoint& p);

// Strict interiority: all entries > kIntTol (Orthant) or the minimum
// eigenvalue > kIntTol (Psd).
bool is_interior(const ConePoint& p);

// Smallest and largest generalized eigenvalues of the pencil X v = lambda Y v
// for X, Y positive definite. Computed by factoring Y, whitening X, and
// taking ordinary symmetric eigenvalues.
std::pair<double, double> gen_eig_extremes(const SymMatrix& X,
                                           const SymMatrix& Y);

// Hilbert projective metric d(x, y) = ln(M(x/y) / m(x/y)); zero exactly when
// x and y lie on the same ray. Both points must be interior (a distance to a
// boundary point would be infinite and raises BoundaryPoint instead).
double hilbert_distance(const ConePoint& x, const ConePoint& y);

}  // namespace coneflow
