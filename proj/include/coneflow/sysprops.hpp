#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "coneflow/errors.hpp"

namespace coneflow {

inline constexpr double kRankTol = 1e-9;
inline constexpr double kStabTol = 1e-9;

enum class StabilityMode { Hurwitz, Schur };
enum class TimeDomain { CT, DT };

// Raw system data for one equation instance; optional blocks are present
// only for the kinds that use them.
struct SystemMatrices {
  Eigen::MatrixXd A;
  std::optional<Eigen::MatrixXd> B;
  std::optional<Eigen::MatrixXd> C;
  std::optional<Eigen::MatrixXd> E;
  std::vector<Eigen::MatrixXd> A_list;
};

// Rank of col(C, CA, ..., CA^{n-1}) equals n, decided by singular values with
// threshold kRankTol * sigma_max.
bool observability_ok(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C);

// Rank of [B, AB, ..., A^{n-1}B] equals n (same threshold rule).
bool controllability_ok(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

// Hurwitz: max real part < -kStabTol. Schur: spectral radius < 1 - kStabTol.
bool stability(const Eigen::MatrixXd& A, StabilityMode mode);

}  // namespace coneflow
