#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "coneflow/matcone.hpp"
#include "coneflow/report.hpp"
#include "coneflow/sysprops.hpp"

namespace coneflow {

// A degree-1 homogeneous cone-preserving operator. `discrete` selects how it
// is driven to its Perron direction: true means the map is iterated directly,
// false means it is the generator of a flow x' = apply(x) and gets integrated.
struct ConeOperator {
  std::function<ConePoint(const ConePoint&)> apply;
  ConeSpec cone;
  bool discrete = true;
  // Integration step for flow generators; 0 picks a conservative default.
  double step = 0.0;
};

using StepObserver = std::function<void(int step, const ConePoint& x)>;

struct PerronOptions {
  double hm_tol = 1e-11;   // Hilbert-step stopping tolerance
  double res_tol = 1e-9;   // directional residual tolerance (flows)
  int max_iters = 200000;
  int window = 1;          // consecutive small steps required to stop
  bool record_trace = true;
  double alpha = std::numeric_limits<double>::quiet_NaN();  // trace metadata
  StepObserver observer;
  // Bracketing mode: when sign_target is finite, the iteration may return
  // early once the eigenvalue estimate has stayed on one side of sign_target
  // by at least sign_margin for sign_window consecutive steps without
  // trending back toward it. Far from the crossing only the sign matters,
  // and the direction need not settle there (at small alpha the dominant
  // modes are nearly degenerate and the estimate can oscillate forever).
  double sign_target = std::numeric_limits<double>::quiet_NaN();
  double sign_margin = 1e-8;
  int sign_window = 600;
};

// Converged Perron direction (trace 1 on the PSD cone, coordinate-sum 1 on
// the orthant) with its eigenvalue: the map eigenvalue for discrete
// operators, the flow eigenvalue (F(x*) = mu x*) for generators.
struct PerronResult {
  ConePoint direction = ConePoint::orthant(Eigen::VectorXd::Ones(1));
  double eigenvalue = 0.0;
  int iterations = 0;
  std::vector<TraceRow> trace;
};

// Normalized power iteration (discrete) or projectively renormalized
// fixed-step RK4 integration (flows) until the Hilbert step between
// successive normalized iterates drops below tolerance. The first n
// iterations (maps) or n time units (flows) are burn-in: boundary iterates
// are tolerated there, afterwards they raise BoundaryPoint.
PerronResult perron_fixed_direction(const ConeOperator& op,
                                    const ConePoint& x0,
                                    const PerronOptions& opts = {});

// Plain fixed-step RK4 integration of x' = op(x) without renormalization;
// the actual flow map phi(t, x0), used by positivity and additivity checks.
ConePoint integrate_flow(const ConeOperator& op, const ConePoint& x0,
                         double t_final);

// Default interior start: identity / trace mass spread uniformly.
ConePoint default_start(const ConeSpec& cone);

// Relative defect of degree-1 homogeneity at one point, for spot checks.
double homogeneity_defect(const ConeOperator& op, const ConePoint& x,
                          double c);

struct CrossingOptions {
  double eig_tol = 1e-10;
  int max_expansions = 12;
  PerronOptions perron;
  std::optional<ConePoint> x0;
  // Extra acceptance test evaluated once |eigenvalue - target| <= eig_tol;
  // bisection keeps refining until it passes (solvers plug the residual
  // check of the extracted candidate solution in here).
  std::function<bool(double alpha, const PerronResult&)> accept;
};

struct CrossingResult {
  double alpha = 0.0;
  PerronResult result;
  int total_iterations = 0;  // summed over all Perron evaluations
  int evaluations = 0;
};

// Locates alpha with eigenvalue(alpha) = target (0 for flows, 1 for maps) by
// geometric bracket expansion (factor 10, up to max_expansions each way from
// bracket0) followed by bisection; Perron evaluations warm-start from the
// previous direction.
CrossingResult find_alpha_crossing(
    const std::function<ConeOperator(double)>& family, double target,
    std::pair<double, double> bracket0, const CrossingOptions& opts = {});

struct SweepPoint {
  double alpha = 0.0;
  std::optional<double> eigenvalue;  // missing when that point failed
};

// Perron eigenvalue per grid point, warm-started left to right.
std::vector<SweepPoint> sweep_alpha(
    const std::function<ConeOperator(double)>& family,
    const std::vector<double>& alpha_grid, const PerronOptions& opts = {});

struct SolveOptions {
  double res_tol = 1e-9;
  double hm_tol = 1e-11;
  double eig_tol = 1e-10;
  int max_iters = 200000;
  std::pair<double, double> alpha_bracket{1e-6, 1e2};
  int max_expansions = 12;
  std::optional<ConePoint> x0;
  bool record_trace = true;
  StepObserver observer;
};

// Operator families behind the concrete solvers (exposed for direct
// iteration and for the alpha sweeps).
ConeOperator positive_linear_operator(const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& c, double alpha);
ConeOperator lyap_ct_operator(const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& C, double alpha);
ConeOperator lyap_dt_operator(const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& C, double alpha);
ConeOperator lyap_stochastic_operator(const Eigen::MatrixXd& A,
                                      const std::vector<Eigen::MatrixXd>& A_list,
                                      const Eigen::MatrixXd& C, double alpha);
ConeOperator lyap_weighted_operator(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& E,
                                    const Eigen::MatrixXd& C, double alpha);

// A p + c = 0 with A Metzler and Hurwitz, c >= 0: homogenized orthant flow
// x' = (A + alpha c 1^T) x, solution p = xi / (alpha 1^T xi) at the alpha
// where the Perron eigenvalue crosses 0.
SolveReport solve_positive_linear(const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& c,
                                  const SolveOptions& opts = {});

// A^T P + P A + C^T C = 0 via the flow X' = A^T X + X A + alpha tr(X) C^T C.
SolveReport solve_lyap_ct(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                          const SolveOptions& opts = {});

// A^T Q A - Q + C^T C = 0 via the map F(X) = A^T X A + alpha tr(X) C^T C.
SolveReport solve_lyap_dt(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                          const SolveOptions& opts = {});

// A^T P + P A + sum_i A_i^T P A_i + C^T C = 0.
SolveReport solve_lyap_stochastic(const Eigen::MatrixXd& A,
                                  const std::vector<Eigen::MatrixXd>& A_list,
                                  const Eigen::MatrixXd& C,
                                  const SolveOptions& opts = {});

// A^T P E + E^T P A + C^T C = 0 with E invertible.
SolveReport solve_lyap_weighted(const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& E,
                                const Eigen::MatrixXd& C,
                                const SolveOptions& opts = {});

}  // namespace coneflow
