#include "coneflow/lyapflow.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace coneflow {

namespace {

// Below this, successive normalized iterates are indistinguishable from the
// d_H measurement noise floor in double precision.
constexpr double kHilbertFloor = 1e-13;

ConePoint rk4_step(const ConeOperator& op, const ConePoint& x,
                   const ConePoint& k1, double h) {
  ConePoint k2 = op.apply(add_scaled(x, k1, 0.5 * h));
  ConePoint k3 = op.apply(add_scaled(x, k2, 0.5 * h));
  ConePoint k4 = op.apply(add_scaled(x, k3, h));
  ConePoint y = add_scaled(x, k1, h / 6.0);
  y = add_scaled(y, k2, h / 3.0);
  y = add_scaled(y, k3, h / 3.0);
  return add_scaled(y, k4, h / 6.0);
}

PerronOptions perron_opts_from(const SolveOptions& o) {
  PerronOptions po;
  po.hm_tol = o.hm_tol;
  po.res_tol = o.res_tol;
  po.max_iters = o.max_iters;
  po.record_trace = o.record_trace;
  po.observer = o.observer;
  return po;
}

SymMatrix extract_psd(const ConePoint& dir, double alpha) {
  const SymMatrix& X = dir.sym();
  return X.scaled(1.0 / (alpha * X.trace()));
}

Eigen::VectorXd extract_orthant(const ConePoint& dir, double alpha) {
  const Eigen::VectorXd& x = dir.vec();
  return x / (alpha * x.sum());
}

double resid_lyap_ct(const Eigen::MatrixXd& A, const Eigen::MatrixXd& CtC,
                     const SymMatrix& P) {
  Eigen::MatrixXd G = A.transpose() * P.mat();
  return (G + G.transpose() + CtC).norm();
}

double resid_lyap_dt(const Eigen::MatrixXd& A, const Eigen::MatrixXd& CtC,
                     const SymMatrix& Q) {
  return (A.transpose() * Q.mat() * A - Q.mat() + CtC).norm();
}

double resid_lyap_stochastic(const Eigen::MatrixXd& A,
                             const std::vector<Eigen::MatrixXd>& A_list,
                             const Eigen::MatrixXd& CtC, const SymMatrix& P) {
  Eigen::MatrixXd G = A.transpose() * P.mat();
  Eigen::MatrixXd M = G + G.transpose() + CtC;
  for (const auto& Ai : A_list) {
    M += Ai.transpose() * P.mat() * Ai;
  }
  return M.norm();
}

double resid_lyap_weighted(const Eigen::MatrixXd& A, const Eigen::MatrixXd& E,
                           const Eigen::MatrixXd& CtC, const SymMatrix& P) {
  Eigen::MatrixXd G = A.transpose() * P.mat() * E;
  return (G + G.transpose() + CtC).norm();
}

void require_square(const Eigen::MatrixXd& A, const char* name) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    fail(ErrorCode::DimensionMismatch,
         std::string(name) + " must be a square matrix of order >= 1");
  }
}

void require_output(const Eigen::MatrixXd& C, int n) {
  if (C.cols() != n || C.rows() < 1) {
    fail(ErrorCode::DimensionMismatch, "C must be p-by-n with p >= 1");
  }
}

void require_alpha(double alpha) {
  if (!(alpha > 0)) {
    fail(ErrorCode::DimensionMismatch, "alpha must be positive");
  }
}

}  // namespace

ConePoint default_start(const ConeSpec& cone) {
  if (cone.kind == ConeKind::Orthant) {
    return ConePoint::orthant(Eigen::VectorXd::Constant(cone.dim, 1.0 / cone.dim));
  }
  return ConePoint::psd(SymMatrix::Identity(cone.dim).scaled(1.0 / cone.dim));
}

double homogeneity_defect(const ConeOperator& op, const ConePoint& x,
                          double c) {
  ConePoint lhs = op.apply(x.scaled(c));
  ConePoint rhs = op.apply(x).scaled(c);
  const double scale = std::max(1e-30, rhs.norm());
  return add_scaled(lhs, rhs, -1.0).norm() / scale;
}

PerronResult perron_fixed_direction(const ConeOperator& op,
                                    const ConePoint& x0,
                                    const PerronOptions& opts) {
  if (!op.apply) {
    fail(ErrorCode::DimensionMismatch, "operator has no apply function");
  }
  if (!(x0.cone() == op.cone)) {
    fail(ErrorCode::DimensionMismatch,
         "start point cone does not match the operator cone");
  }
  if (!(x0.norm() > 0) || !is_member(x0)) {
    fail(ErrorCode::BoundaryPoint, "start point must be nonzero and in the cone");
  }
  const int n = op.cone.dim;
  const bool flow = !op.discrete;
  const double h = flow ? (op.step > 0 ? op.step : 0.25) : 0.0;
  // Strict positivity is only guaranteed after n steps / n time units.
  const int burn_in = flow ? static_cast<int>(std::ceil(n / h)) : n;

  // Maps renormalize by the cone functional (its value on the image is the
  // eigenvalue reading); flows renormalize by the 2-norm, which never
  // vanishes even when an iterate grazes the boundary.
  const double nrm0 = flow ? x0.norm() : x0.normalizer();
  if (!(nrm0 > 0)) {
    fail(ErrorCode::BoundaryPoint, "start point has nonpositive trace/sum");
  }

  ConePoint x = x0.scaled(1.0 / nrm0);
  PerronResult res;
  int consec = 0;

  const bool sign_mode = std::isfinite(opts.sign_target);
  const int sign_window = std::max(2, opts.sign_window);
  std::vector<double> est_ring;
  std::vector<double> grow_ring;
  if (sign_mode) {
    est_ring.assign(sign_window, 0.0);
    grow_ring.assign(sign_window, 0.0);
  }
  int run = 0;
  bool run_positive = false;

  for (int k = 1; k <= opts.max_iters; ++k) {
    ConePoint fx = op.apply(x);
    double est;
    double step_growth;  // log of the raw one-step growth factor
    ConePoint x_next = x;
    if (!flow) {
      est = fx.normalizer();  // functional value on the image = eigenvalue
      if (!std::isfinite(est) || !(est > kMemTol)) {
        fail(ErrorCode::BoundaryPoint,
             "the map sent the iterate to the cone boundary");
      }
      x_next = fx.scaled(1.0 / est);
      step_growth = std::log(est);
    } else {
      const double phi = x.normalizer();
      est = phi > kMemTol ? fx.normalizer() / phi
                          : std::numeric_limits<double>::quiet_NaN();
      if (!std::isfinite(est) && !sign_mode) {
        fail(ErrorCode::BoundaryPoint,
             "flow iterate left the cone (nonpositive trace/sum)");
      }
      ConePoint y = rk4_step(op, x, fx, h);
      const double ny = y.norm();
      if (!std::isfinite(ny) || !(ny > 0)) {
        fail(ErrorCode::BoundaryPoint, "flow iterate vanished or diverged");
      }
      x_next = y.scaled(1.0 / ny);
      step_growth = std::log(ny);
    }

    const double dir_res =
        std::isfinite(est)
            ? add_scaled(fx, x, -est).norm() / x.norm()
            : std::numeric_limits<double>::infinity();
    double hstep;
    try {
      hstep = hilbert_distance(x_next, x);
    } catch (const SolverError& e) {
      if (e.code() != ErrorCode::BoundaryPoint) throw;
      hstep = std::numeric_limits<double>::infinity();
    }
    const double mineig = x_next.min_component();
    // In sign mode the direction may legitimately hug the boundary (far from
    // the crossing the coupling term is negligible); only the sign of the
    // eigenvalue estimate is being read off there.
    if (k > burn_in && !(mineig > kIntTol) && !sign_mode) {
      fail(ErrorCode::BoundaryPoint,
           "iterate left the cone interior after the burn-in window; an "
           "observability-type assumption likely fails");
    }

    if (opts.record_trace) {
      res.trace.push_back({k, opts.alpha, est, hstep, dir_res, mineig});
    }
    if (opts.observer) opts.observer(k, x_next);

    x = x_next;
    res.eigenvalue = est;
    res.iterations = k;

    if (sign_mode) {
      const bool above = std::isfinite(est) &&
                         est > opts.sign_target + opts.sign_margin;
      const bool below = std::isfinite(est) &&
                         est < opts.sign_target - opts.sign_margin;
      if ((above && (run == 0 || run_positive)) ||
          (below && (run == 0 || !run_positive))) {
        run_positive = above;
        est_ring[run % sign_window] = est;
        ++run;
      } else {
        run = 0;
      }
      if (run >= sign_window) {
        // Exit on a settled sign only: the two half-window means must not be
        // trending toward the target (a slow transient could still cross it).
        double m1 = 0.0, m2 = 0.0;
        const int half = sign_window / 2;
        for (int i = 0; i < sign_window; ++i) {
          const double v = est_ring[(run - sign_window + i) % sign_window];
          (i < half ? m1 : m2) += v;
        }
        m1 /= half;
        m2 /= sign_window - half;
        const double d1 = std::abs(m1 - opts.sign_target);
        const double d2 = std::abs(m2 - opts.sign_target);
        if (d2 >= 0.9 * d1) {
          // Warm-start payload only; fall back to the default start if the
          // iterate drifted out of the cone.
          const double phi = x.normalizer();
          res.direction = (is_member(x) && phi > kMemTol)
                              ? x.scaled(1.0 / phi)
                              : default_start(op.cone);
          res.eigenvalue = 0.5 * (m1 + m2);
          return res;
        }
      }

      // Fallback sign reading through the raw norm growth rate (Lyapunov
      // exponent). It tracks the dominant real part even when the iterate
      // rotates or leaves the cone, where the functional estimate resets.
      grow_ring[(k - 1) % sign_window] = step_growth;
      if (k >= sign_window) {
        const int half = sign_window / 2;
        double g1 = 0.0, g2 = 0.0;
        for (int i = 0; i < sign_window; ++i) {
          const double v = grow_ring[(k - sign_window + i) % sign_window];
          (i < half ? g1 : g2) += v;
        }
        const double hq = flow ? h : 1.0;
        const double rate1 = g1 / (half * hq);
        const double rate2 = g2 / ((sign_window - half) * hq);
        const double val1 = flow ? rate1 : std::exp(rate1);
        const double val2 = flow ? rate2 : std::exp(rate2);
        const double margin_g =
            std::max(opts.sign_margin, 5.0 / (sign_window * hq));
        const double d1 = val1 - opts.sign_target;
        const double d2 = val2 - opts.sign_target;
        if (std::abs(d1) > margin_g && std::abs(d2) > margin_g &&
            (d1 > 0) == (d2 > 0) && std::abs(d2) >= 0.75 * std::abs(d1)) {
          const double phi = x.normalizer();
          res.direction = (is_member(x) && phi > kMemTol)
                              ? x.scaled(1.0 / phi)
                              : default_start(op.cone);
          res.eigenvalue = val2;
          return res;
        }
      }
    }

    // The pencil eigenvalues behind d_H carry an eps * cond(Y) measurement
    // error; below that floor successive iterates are indistinguishable.
    double meas_floor = kHilbertFloor;
    if (op.cone.kind == ConeKind::Psd && mineig > 0) {
      meas_floor = std::max(
          meas_floor, 20.0 * std::numeric_limits<double>::epsilon() / mineig);
    }
    const double dir_tol = opts.res_tol * std::max(1.0, std::abs(est));
    bool small_step;
    if (!flow) {
      small_step = hstep < opts.hm_tol ||
                   (hstep < meas_floor && dir_res <= dir_tol);
    } else {
      small_step = (hstep / h < opts.hm_tol || hstep < meas_floor) &&
                   dir_res <= dir_tol;
    }
    if (small_step && mineig > kIntTol) {
      ++consec;
    } else {
      consec = 0;
    }
    if (consec >= opts.window) {
      // Interior at this point, so the cone functional is positive.
      res.direction = x.scaled(1.0 / x.normalizer());
      return res;
    }
  }
  fail(ErrorCode::MaxIterations,
       "Perron iteration did not converge within max_iters");
}

ConePoint integrate_flow(const ConeOperator& op, const ConePoint& x0,
                         double t_final) {
  if (op.discrete) {
    fail(ErrorCode::DimensionMismatch, "integrate_flow needs a flow generator");
  }
  if (!(t_final > 0)) {
    fail(ErrorCode::DimensionMismatch, "t_final must be positive");
  }
  const double h0 = op.step > 0 ? op.step : 0.25;
  const int steps = static_cast<int>(std::ceil(t_final / h0));
  const double h = t_final / steps;
  ConePoint x = x0;
  for (int k = 0; k < steps; ++k) {
    ConePoint k1 = op.apply(x);
    x = rk4_step(op, x, k1, h);
  }
  return x;
}

CrossingResult find_alpha_crossing(
    const std::function<ConeOperator(double)>& family, double target,
    std::pair<double, double> bracket0, const CrossingOptions& opts) {
  const double lo = bracket0.first;
  const double hi = bracket0.second;
  if (!(lo > 0) || !(hi > lo)) {
    fail(ErrorCode::DimensionMismatch,
         "alpha bracket must satisfy 0 < lo < hi");
  }

  CrossingResult out;
  ConeOperator probe = family(lo);
  ConePoint dir = opts.x0.value_or(default_start(probe.cone));

  auto eval = [&](double a, const ConeOperator* pre) -> PerronResult {
    PerronOptions po = opts.perron;
    po.record_trace = false;
    po.observer = nullptr;
    po.alpha = a;
    // Bracket evaluations only need the sign of eigenvalue - target; a
    // sign-exited eigenvalue sits further than sign_margin from the target,
    // so it can never satisfy the acceptance test below.
    po.sign_target = target;
    po.sign_margin = std::max(1e-8, 100.0 * opts.eig_tol);
    PerronResult r = perron_fixed_direction(pre ? *pre : family(a), dir, po);
    dir = r.direction;
    out.total_iterations += r.iterations;
    out.evaluations += 1;
    return r;
  };
  auto accepted = [&](double a, const PerronResult& r) {
    return std::abs(r.eigenvalue - target) <= opts.eig_tol &&
           (!opts.accept || opts.accept(a, r));
  };
  auto finish = [&](double a) -> CrossingResult {
    PerronOptions po = opts.perron;
    po.alpha = a;
    PerronResult fin = perron_fixed_direction(family(a), dir, po);
    out.total_iterations += fin.iterations;
    out.evaluations += 1;
    out.alpha = a;
    out.result = std::move(fin);
    return std::move(out);
  };

  // (alpha, eigenvalue - target), ascending in alpha.
  std::vector<std::pair<double, double>> pts;
  {
    PerronResult r = eval(lo, &probe);
    if (accepted(lo, r)) return finish(lo);
    pts.emplace_back(lo, r.eigenvalue - target);
  }
  {
    PerronResult r = eval(hi, nullptr);
    if (accepted(hi, r)) return finish(hi);
    pts.emplace_back(hi, r.eigenvalue - target);
  }

  auto bracketed = [&]() -> std::optional<std::pair<int, int>> {
    for (int i = 0; i + 1 < static_cast<int>(pts.size()); ++i) {
      const double g0 = pts[i].second;
      const double g1 = pts[i + 1].second;
      if ((g0 <= 0 && g1 >= 0) || (g0 >= 0 && g1 <= 0)) return {{i, i + 1}};
    }
    return std::nullopt;
  };

  int down = 0;
  int up = 0;
  auto br = bracketed();
  while (!br) {
    // All evaluated eigenvalues sit on one side of the target here.
    const bool all_above = pts.front().second > 0;
    const bool can_down = down < opts.max_expansions;
    const bool can_up = up < opts.max_expansions;
    bool go_down;
    if (all_above) {
      go_down = can_down;
      if (!can_down && !can_up) break;
    } else {
      go_down = !can_up && can_down;
      if (!can_down && !can_up) break;
    }
    if (go_down) {
      const double a = pts.front().first / 10.0;
      PerronResult r = eval(a, nullptr);
      if (accepted(a, r)) return finish(a);
      pts.insert(pts.begin(), {a, r.eigenvalue - target});
      ++down;
    } else {
      const double a = pts.back().first * 10.0;
      PerronResult r = eval(a, nullptr);
      if (accepted(a, r)) return finish(a);
      pts.emplace_back(a, r.eigenvalue - target);
      ++up;
    }
    br = bracketed();
  }
  if (!br) {
    fail(ErrorCode::NonBracketable,
         "no sign change of the Perron eigenvalue against the target over "
         "the expanded alpha range");
  }

  double a = pts[br->first].first;
  double ga = pts[br->first].second;
  double b = pts[br->second].first;
  while (true) {
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) {
      fail(ErrorCode::MaxIterations,
           "alpha bisection reached floating-point resolution before meeting "
           "tolerance");
    }
    PerronResult r = eval(mid, nullptr);
    const double gm = r.eigenvalue - target;
    if (accepted(mid, r)) return finish(mid);
    if ((gm < 0) == (ga < 0)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
}

std::vector<SweepPoint> sweep_alpha(
    const std::function<ConeOperator(double)>& family,
    const std::vector<double>& alpha_grid, const PerronOptions& opts) {
  if (alpha_grid.empty()) {
    fail(ErrorCode::DimensionMismatch, "alpha grid must be nonempty");
  }
  for (size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] > 0) ||
        (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))) {
      fail(ErrorCode::DimensionMismatch,
           "alpha grid must be strictly increasing and positive");
    }
  }
  std::vector<SweepPoint> result;
  result.reserve(alpha_grid.size());
  std::optional<ConePoint> warm;
  for (double a : alpha_grid) {
    SweepPoint pt;
    pt.alpha = a;
    try {
      ConeOperator op = family(a);
      PerronOptions po = opts;
      po.record_trace = false;
      po.alpha = a;
      ConePoint x0 = warm.value_or(default_start(op.cone));
      PerronResult r = perron_fixed_direction(op, x0, po);
      warm = r.direction;
      pt.eigenvalue = r.eigenvalue;
    } catch (const SolverError&) {
      // Recorded as a missing point; the sweep itself keeps going.
    }
    result.push_back(pt);
  }
  return result;
}

ConeOperator positive_linear_operator(const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& c, double alpha) {
  require_square(A, "A");
  require_alpha(alpha);
  const int n = static_cast<int>(A.rows());
  if (c.size() != n) {
    fail(ErrorCode::DimensionMismatch, "c must have length n");
  }
  ConeOperator op;
  op.cone = {ConeKind::Orthant, n};
  op.discrete = false;
  const double rate = A.norm() + alpha * c.norm() * std::sqrt(double(n));
  op.step = 0.5 / (1.0 + rate);
  op.apply = [A, c, alpha](const ConePoint& x) {
    return ConePoint::orthant(A * x.vec() + alpha * c * x.vec().sum());
  };
  return op;
}

ConeOperator lyap_ct_operator(const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& C, double alpha) {
  require_square(A, "A");
  require_output(C, static_cast<int>(A.rows()));
  require_alpha(alpha);
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd CtC = C.transpose() * C;
  ConeOperator op;
  op.cone = {ConeKind::Psd, n};
  op.discrete = false;
  const double rate = 2.0 * A.norm() + alpha * CtC.norm();
  op.step = 0.5 / (1.0 + rate);
  op.apply = [A, CtC, alpha](const ConePoint& x) {
    const Eigen::MatrixXd& X = x.sym().mat();
    Eigen::MatrixXd G = A.transpose() * X;
    return ConePoint::psd(
        SymMatrix(G + G.transpose() + (alpha * X.trace()) * CtC));
  };
  return op;
}

ConeOperator lyap_dt_operator(const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& C, double alpha) {
  require_square(A, "A");
  require_output(C, static_cast<int>(A.rows()));
  require_alpha(alpha);
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd CtC = C.transpose() * C;
  ConeOperator op;
  op.cone = {ConeKind::Psd, n};
  op.discrete = true;
  op.apply = [A, CtC, alpha](const ConePoint& x) {
    const Eigen::MatrixXd& X = x.sym().mat();
    Eigen::MatrixXd M = A.transpose() * X * A + (alpha * X.trace()) * CtC;
    M = 0.5 * (M + M.transpose());
    return ConePoint::psd(SymMatrix(M));
  };
  return op;
}

ConeOperator lyap_stochastic_operator(
    const Eigen::MatrixXd& A, const std::vector<Eigen::MatrixXd>& A_list,
    const Eigen::MatrixXd& C, double alpha) {
  require_square(A, "A");
  require_output(C, static_cast<int>(A.rows()));
  require_alpha(alpha);
  const int n = static_cast<int>(A.rows());
  for (const auto& Ai : A_list) {
    if (Ai.rows() != n || Ai.cols() != n) {
      fail(ErrorCode::DimensionMismatch, "every A_i must be n-by-n");
    }
  }
  Eigen::MatrixXd CtC = C.transpose() * C;
  double rate = 2.0 * A.norm() + alpha * CtC.norm();
  for (const auto& Ai : A_list) rate += Ai.norm() * Ai.norm();
  ConeOperator op;
  op.cone = {ConeKind::Psd, n};
  op.discrete = false;
  op.step = 0.5 / (1.0 + rate);
  op.apply = [A, A_list, CtC, alpha](const ConePoint& x) {
    const Eigen::MatrixXd& X = x.sym().mat();
    Eigen::MatrixXd G = A.transpose() * X;
    Eigen::MatrixXd M = G + G.transpose() + (alpha * X.trace()) * CtC;
    for (const auto& Ai : A_list) {
      Eigen::MatrixXd T = Ai.transpose() * X * Ai;
      M += 0.5 * (T + T.transpose());
    }
    return ConePoint::psd(SymMatrix(M));
  };
  return op;
}

ConeOperator lyap_weighted_operator(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& E,
                                    const Eigen::MatrixXd& C, double alpha) {
  require_square(A, "A");
  require_square(E, "E");
  require_output(C, static_cast<int>(A.rows()));
  require_alpha(alpha);
  if (E.rows() != A.rows()) {
    fail(ErrorCode::DimensionMismatch, "E must be n-by-n");
  }
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd CtC = C.transpose() * C;
  ConeOperator op;
  op.cone = {ConeKind::Psd, n};
  op.discrete = false;
  const double rate = 2.0 * A.norm() * E.norm() + alpha * CtC.norm();
  op.step = 0.5 / (1.0 + rate);
  op.apply = [A, E, CtC, alpha](const ConePoint& x) {
    const Eigen::MatrixXd& X = x.sym().mat();
    Eigen::MatrixXd G = A.transpose() * X * E;
    return ConePoint::psd(
        SymMatrix(G + G.transpose() + (alpha * X.trace()) * CtC));
  };
  return op;
}

SolveReport solve_positive_linear(const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& c,
                                  const SolveOptions& opts) {
  require_square(A, "A");
  const int n = static_cast<int>(A.rows());
  if (c.size() != n) {
    fail(ErrorCode::DimensionMismatch, "c must have length n");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && A(i, j) < -kMemTol) {
        fail(ErrorCode::NotMetzler,
             "A is not Metzler (negative off-diagonal entry)");
      }
    }
  }
  if (c.minCoeff() < -kMemTol) {
    fail(ErrorCode::AssumptionViolated, "c must be entrywise nonnegative");
  }
  if (!stability(A, StabilityMode::Hurwitz)) {
    fail(ErrorCode::NotHurwitz, "A is not Hurwitz stable");
  }

  CrossingOptions co;
  co.eig_tol = opts.eig_tol;
  co.max_expansions = opts.max_expansions;
  co.perron = perron_opts_from(opts);
  co.x0 = opts.x0;
  co.accept = [&](double a, const PerronResult& r) {
    Eigen::VectorXd p = extract_orthant(r.direction, a);
    return (A * p + c).lpNorm<Eigen::Infinity>() <= opts.res_tol;
  };
  auto family = [A, c](double a) { return positive_linear_operator(A, c, a); };
  CrossingResult cr =
      find_alpha_crossing(family, 0.0, opts.alpha_bracket, co);

  SolveReport rep;
  Eigen::VectorXd p = extract_orthant(cr.result.direction, cr.alpha);
  rep.residual = (A * p + c).lpNorm<Eigen::Infinity>();
  rep.solution = std::move(p);
  rep.alpha = cr.alpha;
  rep.eigenvalue_at_alpha = cr.result.eigenvalue;
  rep.iterations = cr.total_iterations;
  rep.trace = std::move(cr.result.trace);
  return rep;
}

SolveReport solve_lyap_ct(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                          const SolveOptions& opts) {
  require_square(A, "A");
  require_output(C, static_cast<int>(A.rows()));
  if (!stability(A, StabilityMode::Hurwitz)) {
    fail(ErrorCode::NotHurwitz, "A is not Hurwitz stable");
  }
  if (!observability_ok(A, C)) {
    fail(ErrorCode::NotObservable, "(A, C) is not observable");
  }
  Eigen::MatrixXd CtC = C.transpose() * C;
  const double scale = std::max(1.0, CtC.norm());

  CrossingOptions co;
  co.eig_tol = opts.eig_tol;
  co.max_expansions = opts.max_expansions;
  co.perron = perron_opts_from(opts);
  co.x0 = opts.x0;
  co.accept = [&](double a, const PerronResult& r) {
    return resid_lyap_ct(A, CtC, extract_psd(r.direction, a)) <=
           opts.res_tol * scale;
  };
  auto family = [A, C](double a) { return lyap_ct_operator(A, C, a); };
  CrossingResult cr =
      find_alpha_crossing(family, 0.0, opts.alpha_bracket, co);

  SolveReport rep;
  SymMatrix P = extract_psd(cr.result.direction, cr.alpha);
  rep.residual = resid_lyap_ct(A, CtC, P);
  rep.solution = std::move(P);
  rep.alpha = cr.alpha;
  rep.eigenvalue_at_alpha = cr.result.eigenvalue;
  rep.iterations = cr.total_iterations;
  rep.trace = std::move(cr.result.trace);
  return rep;
}

SolveReport solve_lyap_dt(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                          const SolveOptions& opts) {
  require_square(A, "A");
  require_output(C, static_cast<int>(A.rows()));
  if (!stability(A, StabilityMode::Schur)) {
    fail(ErrorCode::NotSchurStable, "A is not Schur stable");
  }
  if (!observability_ok(A, C)) {
    fail(ErrorCode::NotObservable, "(A, C) is not observable");
  }
  Eigen::MatrixXd CtC = C.transpose() * C;
  const double scale = std::max(1.0, CtC.norm());

  CrossingOptions co;
  co.eig_tol = opts.eig_tol;
  co.max_expansions = opts.max_expansions;
  co.perron = perron_opts_from(opts);
  co.x0 = opts.x0;
  co.accept = [&](double a, const PerronResult& r) {
    return resid_lyap_dt(A, CtC, extract_psd(r.direction, a)) <=
           opts.res_tol * scale;
  };
  auto family = [A, C](double a) { return lyap_dt_operator(A, C, a); };
  CrossingResult cr =
      find_alpha_crossing(family, 1.0, opts.alpha_bracket, co);

  SolveReport rep;
  SymMatrix Q = extract_psd(cr.result.direction, cr.alpha);
  rep.residual = resid_lyap_dt(A, CtC, Q);
  rep.solution = std::move(Q);
  rep.alpha = cr.alpha;
  rep.eigenvalue_at_alpha = cr.result.eigenvalue;
  rep.iterations = cr.total_iterations;
  rep.trace = std::move(cr.result.trace);
  return rep;
}

SolveReport solve_lyap_stochastic(const Eigen::MatrixXd& A,
                                  const std::vector<Eigen::MatrixXd>& A_list,
                                  const Eigen::MatrixXd& C,
                                  const SolveOptions& opts) {
  require_square(A, "A");
  require_output(C, static_cast<int>(A.rows()));
  const int n = static_cast<int>(A.rows());
  for (const auto& Ai : A_list) {
    if (Ai.rows() != n || Ai.cols() != n) {
      fail(ErrorCode::DimensionMismatch, "every A_i must be n-by-n");
    }
  }
  if (!observability_ok(A, C)) {
    fail(ErrorCode::NotObservable, "(A, C) is not observable");
  }
  Eigen::MatrixXd CtC = C.transpose() * C;
  const double scale = std::max(1.0, CtC.norm());

  CrossingOptions co;
  co.eig_tol = opts.eig_tol;
  co.max_expansions = opts.max_expansions;
  co.perron = perron_opts_from(opts);
  co.x0 = opts.x0;
  co.accept = [&](double a, const PerronResult& r) {
    return resid_lyap_stochastic(A, A_list, CtC,
                                 extract_psd(r.direction, a)) <=
           opts.res_tol * scale;
  };
  auto family = [A, A_list, C](double a) {
    return lyap_stochastic_operator(A, A_list, C, a);
  };
  CrossingResult cr =
      find_alpha_crossing(family, 0.0, opts.alpha_bracket, co);

  SolveReport rep;
  SymMatrix P = extract_psd(cr.result.direction, cr.alpha);
  rep.residual = resid_lyap_stochastic(A, A_list, CtC, P);
  rep.solution = std::move(P);
  rep.alpha = cr.alpha;
  rep.eigenvalue_at_alpha = cr.result.eigenvalue;
  rep.iterations = cr.total_iterations;
  rep.trace = std::move(cr.result.trace);
  return rep;
}

SolveReport solve_lyap_weighted(const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& E,
                                const Eigen::MatrixXd& C,
                                const SolveOptions& opts) {
  require_square(A, "A");
  require_square(E, "E");
  require_output(C, static_cast<int>(A.rows()));
  if (E.rows() != A.rows()) {
    fail(ErrorCode::DimensionMismatch, "E must be n-by-n");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(E);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(sv.size() - 1) <= kRankTol * sv(0)) {
    fail(ErrorCode::SingularE, "E is singular");
  }
  if (!observability_ok(A, C)) {
    fail(ErrorCode::NotObservable, "(A, C) is not observable");
  }
  Eigen::MatrixXd CtC = C.transpose() * C;
  const double scale = std::max(1.0, CtC.norm());

  CrossingOptions co;
  co.eig_tol = opts.eig_tol;
  co.max_expansions = opts.max_expansions;
  co.perron = perron_opts_from(opts);
  co.x0 = opts.x0;
  co.accept = [&](double a, const PerronResult& r) {
    return resid_lyap_weighted(A, E, CtC, extract_psd(r.direction, a)) <=
           opts.res_tol * scale;
  };
  auto family = [A, E, C](double a) {
    return lyap_weighted_operator(A, E, C, a);
  };
  CrossingResult cr =
      find_alpha_crossing(family, 0.0, opts.alpha_bracket, co);

  SolveReport rep;
  SymMatrix P = extract_psd(cr.result.direction, cr.alpha);
  rep.residual = resid_lyap_weighted(A, E, CtC, P);
  rep.solution = std::move(P);
  rep.alpha = cr.alpha;
  rep.eigenvalue_at_alpha = cr.result.eigenvalue;
  rep.iterations = cr.total_iterations;
  rep.trace = std::move(cr.result.trace);
  return rep;
}

}  // namespace coneflow
