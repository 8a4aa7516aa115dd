#pragma once

#include <Eigen/Dense>

#include <string>
#include <variant>
#include <vector>

#include "coneflow/matcone.hpp"

namespace coneflow {

// One iteration record. For flows there is one row per accepted integration
// step. `residual` is the directional eigen-residual ||F(x) - est * x|| / ||x||
// at the current normalized iterate; `min_eig` is its minimum entry (Orthant)
// or minimum eigenvalue (Psd).
struct TraceRow {
  int step = 0;
  double alpha = 0.0;
  double eig_estimate = 0.0;
  double hilbert_step = 0.0;
  double residual = 0.0;
  double min_eig = 0.0;
};

// Result of one equation solve: the extracted solution, the located
// homogenization parameter, the Perron eigenvalue estimate there, the
// defining-equation residual, the total iteration count across the alpha
// search, and the iteration trace of the final run.
struct SolveReport {
  std::variant<Eigen::VectorXd, SymMatrix> solution;
  double alpha = 0.0;
  double eigenvalue_at_alpha = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::vector<TraceRow> trace;
  std::string notes;

  const SymMatrix& solution_sym() const {
    return std::get<SymMatrix>(solution);
  }
  const Eigen::VectorXd& solution_vec() const {
    return std::get<Eigen::VectorXd>(solution);
  }
};

}  // namespace coneflow
