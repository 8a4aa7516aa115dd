#pragma once

// Seeded random instance generators shared by the unit and acceptance suites.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <random>
#include <vector>

#include "coneflow/matcone.hpp"
#include "coneflow/poslqr.hpp"
#include "coneflow/ricflow.hpp"
#include "coneflow/sysprops.hpp"

namespace cftest {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd gaussian(std::mt19937_64& g, int rows, int cols) {
  std::normal_distribution<double> d(0.0, 1.0);
  MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) M(i, j) = d(g);
  }
  return M;
}

inline double spectral_abscissa(const MatrixXd& A) {
  return Eigen::EigenSolver<MatrixXd>(A, false).eigenvalues().real().maxCoeff();
}

inline double spectral_radius(const MatrixXd& A) {
  return Eigen::EigenSolver<MatrixXd>(A, false).eigenvalues().cwiseAbs().maxCoeff();
}

inline MatrixXd random_hurwitz(std::mt19937_64& g, int n, double margin = 0.4) {
  MatrixXd A = gaussian(g, n, n);
  return A - (spectral_abscissa(A) + margin) * MatrixXd::Identity(n, n);
}

inline MatrixXd random_schur(std::mt19937_64& g, int n, double radius = 0.8) {
  MatrixXd A = gaussian(g, n, n);
  const double rho = spectral_radius(A);
  if (rho > 0) A *= radius / rho;
  return A;
}

// Hurwitz with a mostly real spectrum; every alpha on a wide grid resolves.
inline MatrixXd random_hurwitz_realish(std::mt19937_64& g, int n) {
  std::uniform_real_distribution<double> u(0.4, 2.5);
  MatrixXd A = 0.15 * gaussian(g, n, n);
  for (int i = 0; i < n; ++i) A(i, i) -= u(g);
  return A;
}

inline MatrixXd random_schur_realish(std::mt19937_64& g, int n) {
  std::uniform_real_distribution<double> u(0.1, 0.85);
  MatrixXd A = 0.05 * gaussian(g, n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = u(g) * (g() % 2 ? 1.0 : -1.0);
  }
  if (spectral_radius(A) > 0.95) A *= 0.9 / spectral_radius(A);
  return A;
}

inline MatrixXd observable_C(std::mt19937_64& g, const MatrixXd& A, int p) {
  for (int tries = 0; tries < 100; ++tries) {
    MatrixXd C = gaussian(g, p, static_cast<int>(A.rows()));
    if (coneflow::observability_ok(A, C)) return C;
  }
  throw std::runtime_error("could not draw an observable C");
}

inline MatrixXd controllable_B(std::mt19937_64& g, const MatrixXd& A, int m) {
  for (int tries = 0; tries < 100; ++tries) {
    MatrixXd B = gaussian(g, static_cast<int>(A.rows()), m);
    if (coneflow::controllability_ok(A, B)) return B;
  }
  throw std::runtime_error("could not draw a controllable B");
}

inline coneflow::SymMatrix random_spd(std::mt19937_64& g, int n,
                                      double shift = 0.3) {
  MatrixXd W = gaussian(g, n, n);
  return coneflow::SymMatrix(W * W.transpose() / n +
                             shift * MatrixXd::Identity(n, n));
}

inline coneflow::SymMatrix random_psd(std::mt19937_64& g, int n) {
  MatrixXd W = gaussian(g, n, n);
  return coneflow::SymMatrix(W * W.transpose() / n);
}

inline coneflow::SymMatrix rank1_psd(std::mt19937_64& g, int n) {
  VectorXd v = gaussian(g, n, 1);
  v.normalize();
  return coneflow::SymMatrix(v * v.transpose());
}

inline VectorXd positive_vector(std::mt19937_64& g, int n, double lo = 0.2,
                                double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(g);
  return v;
}

struct StochasticInstance {
  MatrixXd A;
  std::vector<MatrixXd> A_list;
  MatrixXd C;
};

// A gets a wide stability margin so the noise terms cannot destabilize the
// mean-square dynamics, which keeps the alpha crossing bracketable.
inline StochasticInstance random_stochastic(std::mt19937_64& g, int n, int p) {
  StochasticInstance inst;
  inst.A = random_hurwitz(g, n, 1.0);
  const int r = 1 + static_cast<int>(g() % 2);
  for (int i = 0; i < r; ++i) {
    inst.A_list.push_back(0.25 * gaussian(g, n, n) / std::sqrt(double(n)));
  }
  inst.C = observable_C(g, inst.A, p);
  return inst;
}

struct WeightedInstance {
  MatrixXd A;
  MatrixXd E;
  MatrixXd C;
};

// E stays near the identity and A = F E with F Hurwitz, so the weighted
// equation is a disguised standard Lyapunov equation with a PD solution.
// F gets a mostly real, well separated spectrum: with a complex-dominant F
// the weighted flow's leading eigendirection can leave the PSD cone (the
// construction carries no stated hypotheses for this equation) and the
// solver then fails loudly by design.
inline WeightedInstance random_weighted(std::mt19937_64& g, int n, int p) {
  WeightedInstance inst;
  for (int tries = 0; tries < 100; ++tries) {
    inst.E = MatrixXd::Identity(n, n) + 0.25 * gaussian(g, n, n) / std::sqrt(double(n));
    Eigen::JacobiSVD<MatrixXd> svd(inst.E);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > 0.3 * sv(0)) break;
  }
  MatrixXd F = random_hurwitz_realish(g, n);
  inst.A = F * inst.E;
  inst.C = observable_C(g, inst.A, p);
  return inst;
}

struct BellmanInstance {
  MatrixXd A, B, E;
  VectorXd s, r;
};

// Construction keeps every instance inside the standing assumptions with
// H1 witnessed by L = 0 (row sums of A below 1) and H2 strict.
inline BellmanInstance random_bellman(std::mt19937_64& g, int n, int m) {
  BellmanInstance inst;
  inst.B = gaussian(g, n, m);
  MatrixXd E0 = gaussian(g, m, n).cwiseAbs() * (0.3 / n);
  auto max_row_sum = [](const MatrixXd& M) {
    return M.cwiseAbs().rowwise().sum().maxCoeff();
  };
  MatrixXd raw = inst.B.cwiseAbs() * E0;
  const double rnorm = max_row_sum(raw);
  if (rnorm > 0.35) {
    E0 *= 0.35 / rnorm;
    raw = inst.B.cwiseAbs() * E0;
  }
  inst.E = E0;
  MatrixXd D = gaussian(g, n, n).cwiseAbs();
  // Row sums of A = raw + D stay below 0.8, so A is Schur with L = 0.
  D *= 0.4 / std::max(1e-12, max_row_sum(D));
  inst.A = raw + D;
  inst.r = gaussian(g, m, 1);
  inst.s = inst.E.transpose() * inst.r.cwiseAbs() + positive_vector(g, n, 0.2, 0.8);
  return inst;
}

struct RiccatiInstance {
  MatrixXd A, B, C;
  coneflow::SymMatrix R;
};

inline RiccatiInstance random_riccati(std::mt19937_64& g, int n, int m, int p,
                                      coneflow::TimeDomain time) {
  RiccatiInstance inst;
  inst.A = time == coneflow::TimeDomain::CT ? random_hurwitz(g, n, 0.4)
                                            : random_schur(g, n, 0.85);
  inst.B = controllable_B(g, inst.A, m);
  inst.C = observable_C(g, inst.A, p);
  MatrixXd W = gaussian(g, m, m);
  inst.R = coneflow::SymMatrix(MatrixXd::Identity(m, m) +
                               W * W.transpose() / m);
  return inst;
}

// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x,
                       const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace cftest
