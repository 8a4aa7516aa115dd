#pragma once

#include <Eigen/Dense>

#include <optional>

#include "coneflow/lyapflow.hpp"
#include "coneflow/report.hpp"

namespace coneflow {

// Bellman equation data for p = s + A^T p - E^T |r + B^T p|. The standing
// assumptions (E >= 0, s >= E^T r, A >= |B| E, all entrywise) are checked on
// construction and violations raise AssumptionViolated.
struct BellmanProblem {
  BellmanProblem(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in,
                 Eigen::MatrixXd E_in, Eigen::VectorXd s_in,
                 Eigen::VectorXd r_in,
                 std::optional<Eigen::MatrixXd> L_cert_in = std::nullopt);

  Eigen::MatrixXd A;  // n-by-n, entrywise >= |B| E
  Eigen::MatrixXd B;  // n-by-m
  Eigen::MatrixXd E;  // m-by-n, entrywise nonnegative
  Eigen::VectorXd s;  // length n
  Eigen::VectorXd r;  // length m
  std::optional<Eigen::MatrixXd> L_cert;  // optional H1 certificate, m-by-n

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
};

// F(p) = alpha (1^T p) s + A^T p - E^T |alpha (1^T p) r + B^T p|.
Eigen::VectorXd bellman_map(const BellmanProblem& prob, double alpha,
                            const Eigen::VectorXd& p);

enum class H1Status { Yes, No, Unknown };

// H1 is an existence statement over a continuum of L: it is reported Yes only
// when a concrete witness verifies (the user certificate or one of the two
// heuristics L = 0 and L_ij = E_ij sign(B^T_ij)), No when a supplied
// certificate fails and no heuristic rescues it, Unknown otherwise.
struct AssumptionReport {
  bool standing = false;
  H1Status h1 = H1Status::Unknown;
  bool h2 = false;
};

AssumptionReport check_assumptions(const BellmanProblem& prob);

ConeOperator bellman_operator(const BellmanProblem& prob, double alpha);

// Solves the Bellman equation through the homogenized orthant map at the
// alpha where its Perron eigenvalue reaches 1; p = p*/(alpha 1^T p*).
SolveReport solve_positive_bellman(const BellmanProblem& prob,
                                   const SolveOptions& opts = {});

}  // namespace coneflow
