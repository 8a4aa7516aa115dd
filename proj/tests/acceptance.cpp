// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run it through ctest or directly from the build tree.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coneflow/lyapflow.hpp"
#include "coneflow/oracle.hpp"
#include "coneflow/poslqr.hpp"
#include "coneflow/problem_io.hpp"
#include "coneflow/ricflow.hpp"
#include "coneflow/sysprops.hpp"

#include "test_support.hpp"

using namespace coneflow;
using cftest::gaussian;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += msg;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

MatrixXd mat1(double v) {
  MatrixXd M(1, 1);
  M(0, 0) = v;
  return M;
}

VectorXd vec1(double v) {
  VectorXd x(1);
  x(0) = v;
  return x;
}

// Solutions produced along the way, re-verified by the residual suite.
struct Sample {
  ProblemSpec spec;
  SolveReport report;
};
std::vector<Sample> g_samples;

ProblemSpec spec_lyap(ProblemKind kind, const MatrixXd& A, const MatrixXd& C) {
  ProblemSpec s;
  s.kind = kind;
  s.sys.A = A;
  s.sys.C = C;
  return s;
}

// ---------------------------------------------------------------------------
// 1. Closed-form scalar regression.
Check criterion1() {
  Check c;
  SolveOptions opts;

  auto near = [&](double got, double want, const char* what) {
    c.expect(std::abs(got - want) <= 1e-8,
             std::string(what) + " got " + fmt(got) + " want " + fmt(want));
  };

  SolveReport r = solve_lyap_ct(mat1(-1), mat1(1), opts);
  near(r.solution_sym().mat()(0, 0), 0.5, "lyap_ct");
  g_samples.push_back({spec_lyap(ProblemKind::LyapCt, mat1(-1), mat1(1)), r});

  r = solve_lyap_dt(mat1(0.5), mat1(1), opts);
  near(r.solution_sym().mat()(0, 0), 4.0 / 3.0, "lyap_dt");
  g_samples.push_back({spec_lyap(ProblemKind::LyapDt, mat1(0.5), mat1(1)), r});

  RiccatiProblem dt(mat1(1), mat1(1), SymMatrix(mat1(1)), mat1(1),
                    TimeDomain::DT);
  r = solve_riccati_dt(dt, opts);
  near(r.solution_sym().mat()(0, 0), (1.0 + std::sqrt(5.0)) / 2.0,
       "riccati_dt");
  {
    ProblemSpec s;
    s.kind = ProblemKind::RiccatiDt;
    s.sys.A = mat1(1);
    s.sys.B = mat1(1);
    s.sys.C = mat1(1);
    s.R = mat1(1);
    g_samples.push_back({s, r});
  }

  RiccatiProblem ct(mat1(1), mat1(1), SymMatrix(mat1(1)), mat1(1),
                    TimeDomain::CT);
  r = solve_riccati_ct(ct, opts);
  near(r.solution_sym().mat()(0, 0), 1.0 + std::sqrt(2.0), "riccati_ct");
  {
    ProblemSpec s;
    s.kind = ProblemKind::RiccatiCt;
    s.sys.A = mat1(1);
    s.sys.B = mat1(1);
    s.sys.C = mat1(1);
    s.R = mat1(1);
    g_samples.push_back({s, r});
  }

  BellmanProblem bell(mat1(0.5), mat1(1), mat1(0.25), vec1(1), vec1(0));
  r = solve_positive_bellman(bell, opts);
  near(r.solution_vec()(0), 4.0 / 3.0, "positive_bellman");
  {
    ProblemSpec s;
    s.kind = ProblemKind::PositiveBellman;
    s.sys.A = mat1(0.5);
    s.sys.B = mat1(1);
    s.sys.E = mat1(0.25);
    s.s = vec1(1);
    s.r = vec1(0);
    g_samples.push_back({s, r});
  }

  r = solve_lyap_stochastic(mat1(-1), {mat1(0.5)}, mat1(1), opts);
  near(r.solution_sym().mat()(0, 0), 4.0 / 7.0, "lyap_stochastic");
  {
    ProblemSpec s = spec_lyap(ProblemKind::LyapStochastic, mat1(-1), mat1(1));
    s.sys.A_list = {mat1(0.5)};
    g_samples.push_back({s, r});
  }

  r = solve_lyap_weighted(mat1(-1), mat1(2), mat1(1), opts);
  near(r.solution_sym().mat()(0, 0), 0.25, "lyap_weighted");
  {
    ProblemSpec s = spec_lyap(ProblemKind::LyapWeighted, mat1(-1), mat1(1));
    s.sys.E = mat1(2);
    g_samples.push_back({s, r});
  }
  return c;
}

// ---------------------------------------------------------------------------
// 2. Oracle equivalence on random systems.
Check criterion2() {
  Check c;
  std::mt19937_64 g(20250811);
  const int trials = 100;
  int failures = 0;

  auto sizes = [&](int& n, int& p, int& m) {
    n = 2 + static_cast<int>(g() % 5);
    p = 1 + static_cast<int>(g() % n);
    m = 1 + static_cast<int>(g() % n);
  };

  for (int t = 0; t < trials && c.ok; ++t) {
    int n, p, m;
    sizes(n, p, m);
    try {
      // CT Lyapunov
      {
        MatrixXd A = cftest::random_hurwitz(g, n);
        MatrixXd C = cftest::observable_C(g, A, p);
        SolveReport r = solve_lyap_ct(A, C);
        SymMatrix Po = oracle::lyap_kron_solve(A, C, TimeDomain::CT);
        const double d =
            (r.solution_sym().mat() - Po.mat()).norm() / Po.mat().norm();
        c.expect(d <= 1e-6, "lyap_ct delta " + fmt(d) + " trial " +
                                std::to_string(t));
        g_samples.push_back({spec_lyap(ProblemKind::LyapCt, A, C), r});
      }
      // DT Lyapunov
      {
        MatrixXd A = cftest::random_schur(g, n);
        MatrixXd C = cftest::observable_C(g, A, p);
        SolveReport r = solve_lyap_dt(A, C);
        SymMatrix Qo = oracle::lyap_kron_solve(A, C, TimeDomain::DT);
        const double d =
            (r.solution_sym().mat() - Qo.mat()).norm() / Qo.mat().norm();
        c.expect(d <= 1e-6, "lyap_dt delta " + fmt(d) + " trial " +
                                std::to_string(t));
        g_samples.push_back({spec_lyap(ProblemKind::LyapDt, A, C), r});
      }
      // stochastic
      {
        cftest::StochasticInstance inst = cftest::random_stochastic(g, n, p);
        SolveReport r = solve_lyap_stochastic(inst.A, inst.A_list, inst.C);
        SymMatrix Po =
            oracle::lyap_kron_solve_stochastic(inst.A, inst.A_list, inst.C);
        const double d =
            (r.solution_sym().mat() - Po.mat()).norm() / Po.mat().norm();
        c.expect(d <= 1e-6, "lyap_stochastic delta " + fmt(d) + " trial " +
                                std::to_string(t));
        ProblemSpec s = spec_lyap(ProblemKind::LyapStochastic, inst.A, inst.C);
        s.sys.A_list = inst.A_list;
        g_samples.push_back({s, r});
      }
      // weighted
      {
        cftest::WeightedInstance inst = cftest::random_weighted(g, n, p);
        SolveReport r = solve_lyap_weighted(inst.A, inst.E, inst.C);
        SymMatrix Po =
            oracle::lyap_kron_solve_weighted(inst.A, inst.E, inst.C);
        const double d =
            (r.solution_sym().mat() - Po.mat()).norm() / Po.mat().norm();
        c.expect(d <= 1e-6, "lyap_weighted delta " + fmt(d) + " trial " +
                                std::to_string(t));
        ProblemSpec s = spec_lyap(ProblemKind::LyapWeighted, inst.A, inst.C);
        s.sys.E = inst.E;
        g_samples.push_back({s, r});
      }
      // DT Riccati
      {
        cftest::RiccatiInstance inst =
            cftest::random_riccati(g, n, m, p, TimeDomain::DT);
        RiccatiProblem prob(inst.A, inst.B, inst.R, inst.C, TimeDomain::DT);
        SolveReport r = solve_riccati_dt(prob);
        SymMatrix Po =
            oracle::riccati_dt_value_iter(inst.A, inst.B, inst.R, inst.C, 1e-12);
        const double d =
            (r.solution_sym().mat() - Po.mat()).norm() / Po.mat().norm();
        c.expect(d <= 1e-6, "riccati_dt delta " + fmt(d) + " trial " +
                                std::to_string(t));
        ProblemSpec s;
        s.kind = ProblemKind::RiccatiDt;
        s.sys.A = inst.A;
        s.sys.B = inst.B;
        s.sys.C = inst.C;
        s.R = inst.R.mat();
        g_samples.push_back({s, r});
      }
      // CT Riccati
      {
        cftest::RiccatiInstance inst =
            cftest::random_riccati(g, n, m, p, TimeDomain::CT);
        RiccatiProblem prob(inst.A, inst.B, inst.R, inst.C, TimeDomain::CT);
        SolveReport r = solve_riccati_ct(prob);
        SymMatrix Po =
            oracle::riccati_ct_oracle(inst.A, inst.B, inst.R, inst.C, 1e-9);
        const double d =
            (r.solution_sym().mat() - Po.mat()).norm() / Po.mat().norm();
        c.expect(d <= 1e-5, "riccati_ct delta " + fmt(d) + " trial " +
                                std::to_string(t));
        ProblemSpec s;
        s.kind = ProblemKind::RiccatiCt;
        s.sys.A = inst.A;
        s.sys.B = inst.B;
        s.sys.C = inst.C;
        s.R = inst.R.mat();
        g_samples.push_back({s, r});
      }
      // positive Bellman
      {
        cftest::BellmanInstance inst = cftest::random_bellman(g, n, m);
        BellmanProblem prob(inst.A, inst.B, inst.E, inst.s, inst.r);
        SolveReport r = solve_positive_bellman(prob);
        VectorXd po = oracle::bellman_iter_oracle(prob, 1e-13);
        const double d = (r.solution_vec() - po).lpNorm<Eigen::Infinity>();
        c.expect(d <= 1e-8, "bellman delta " + fmt(d) + " trial " +
                                std::to_string(t));
        ProblemSpec s;
        s.kind = ProblemKind::PositiveBellman;
        s.sys.A = inst.A;
        s.sys.B = inst.B;
        s.sys.E = inst.E;
        s.s = inst.s;
        s.r = inst.r;
        g_samples.push_back({s, r});
      }
    } catch (const SolverError& e) {
      ++failures;
      c.expect(false, std::string("solver error at trial ") +
                          std::to_string(t) + ": " + e.what());
    }
  }
  c.expect(failures == 0, std::to_string(failures) + " solver failures");
  return c;
}

// ---------------------------------------------------------------------------
// 3. Residual suite over every solution produced so far.
Check criterion3() {
  Check c;
  c.expect(!g_samples.empty(), "no samples collected");
  for (size_t i = 0; i < g_samples.size(); ++i) {
    const Sample& smp = g_samples[i];
    const double recomputed = recompute_residual(smp.spec, smp.report);
    double bound = 1e-9;
    if (smp.spec.sys.C) {
      const MatrixXd CtC = smp.spec.sys.C->transpose() * *smp.spec.sys.C;
      bound = 1e-9 * std::max(1.0, CtC.norm());
    }
    c.expect(recomputed <= bound,
             "sample " + std::to_string(i) + " residual " + fmt(recomputed) +
                 " > bound " + fmt(bound));
    c.expect(std::abs(recomputed - smp.report.residual) <= 1e-12,
             "sample " + std::to_string(i) + " reported " +
                 fmt(smp.report.residual) + " vs recomputed " +
                 fmt(recomputed));
    if (!c.ok) break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// 4. Positivity: strict interiority from rank-1 starts.
Check criterion4() {
  Check c;
  std::mt19937_64 g(424242);
  int failures = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(g() % 5);
    const int p = 1 + static_cast<int>(g() % n);
    const int m = 1 + static_cast<int>(g() % n);
    ConePoint x0 = ConePoint::psd(cftest::rank1_psd(g, n));

    // DT Lyapunov map: F^n(X0) interior.
    {
      MatrixXd A = cftest::random_schur(g, n);
      MatrixXd C = cftest::observable_C(g, A, p);
      ConeOperator op = lyap_dt_operator(A, C, 1.0);
      ConePoint x = x0;
      for (int k = 0; k < n; ++k) x = op.apply(x);
      if (!(x.min_component() > 0)) ++failures;
    }
    // CT Lyapunov flow at t = 1.
    {
      MatrixXd A = cftest::random_hurwitz(g, n);
      MatrixXd C = cftest::observable_C(g, A, p);
      ConeOperator op = lyap_ct_operator(A, C, 1.0);
      ConePoint x = integrate_flow(op, x0, 1.0);
      if (!(x.min_component() > 0)) ++failures;
    }
    // DT Riccati map: F^n(X0) interior.
    {
      cftest::RiccatiInstance inst =
          cftest::random_riccati(g, n, m, p, TimeDomain::DT);
      RiccatiProblem prob(inst.A, inst.B, inst.R, inst.C, TimeDomain::DT);
      ConeOperator op = riccati_dt_operator(prob, 0.7);
      ConePoint x = x0;
      for (int k = 0; k < n; ++k) x = op.apply(x);
      if (!(x.min_component() > 0)) ++failures;
    }
    // CT Riccati flow at t = 1.
    {
      cftest::RiccatiInstance inst =
          cftest::random_riccati(g, n, m, p, TimeDomain::CT);
      RiccatiProblem prob(inst.A, inst.B, inst.R, inst.C, TimeDomain::CT);
      ConeOperator op = riccati_ct_operator(prob, 0.7);
      ConePoint x = integrate_flow(op, x0, 1.0);
      if (!(x.min_component() > 0)) ++failures;
    }
  }
  c.expect(failures == 0, std::to_string(failures) + " positivity failures");
  return c;
}

// ---------------------------------------------------------------------------
// 5. Hilbert contraction along the trace at the crossing alpha.
Check criterion5() {
  Check c;
  std::mt19937_64 g(5150);
  for (int t = 0; t < 20 && c.ok; ++t) {
    const int n = 2 + static_cast<int>(g() % 3);
    const int p = 1 + static_cast<int>(g() % n);
    const bool ct = t % 2 == 0;
    MatrixXd A = ct ? cftest::random_hurwitz_realish(g, n)
                    : cftest::random_schur_realish(g, n);
    MatrixXd C = cftest::observable_C(g, A, p);

    SolveReport sol = ct ? solve_lyap_ct(A, C) : solve_lyap_dt(A, C);
    const double alpha = sol.alpha;
    ConeOperator op = ct ? lyap_ct_operator(A, C, alpha)
                         : lyap_dt_operator(A, C, alpha);

    // Fresh run from the identity against the converged direction.
    const SymMatrix Xstar = sol.solution_sym().scaled(
        1.0 / sol.solution_sym().trace());
    ConePoint target = ConePoint::psd(Xstar);
    std::vector<double> dists;
    PerronOptions po;
    po.record_trace = false;
    po.observer = [&](int, const ConePoint& x) {
      try {
        dists.push_back(hilbert_distance(x, target));
      } catch (const SolverError&) {
        dists.push_back(std::numeric_limits<double>::infinity());
      }
    };
    perron_fixed_direction(op, default_start(op.cone), po);

    const int burn = ct ? static_cast<int>(std::ceil(n / op.step)) : n;
    int total = 0, monotone = 0;
    std::vector<double> ks, lnd;
    for (size_t k = burn; k + 1 < dists.size(); ++k) {
      if (!(dists[k] > 1e-12) || !(dists[k + 1] > 1e-12)) continue;
      if (!std::isfinite(dists[k]) || !std::isfinite(dists[k + 1])) continue;
      ++total;
      if (dists[k + 1] <= dists[k] * (1.0 + 1e-12)) ++monotone;
      ks.push_back(double(k));
      lnd.push_back(std::log(dists[k]));
    }
    c.expect(total >= 2, "trace too short, trial " + std::to_string(t));
    if (total > 0) {
      c.expect(monotone >= 0.99 * total,
               "monotone fraction " + fmt(double(monotone) / total) +
                   " trial " + std::to_string(t));
    }
    if (ks.size() >= 5) {
      const double slope = cftest::ls_slope(ks, lnd);
      c.expect(slope < -1e-4,
               "slope " + fmt(slope) + " trial " + std::to_string(t));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 6. Monotone eigenvalue curves and the exact scalar families.
Check criterion6() {
  Check c;
  std::mt19937_64 g(606060);

  auto geometric_grid = [](double lo, double hi, int k) {
    std::vector<double> grid(k);
    for (int i = 0; i < k; ++i) {
      grid[i] = lo * std::pow(hi / lo, double(i) / (k - 1));
    }
    return grid;
  };

  // Random linear families, swept a decade around the located crossing:
  // nondecreasing eigenvalue in alpha.
  for (int t = 0; t < 10 && c.ok; ++t) {
    const int n = 2 + static_cast<int>(g() % 3);
    const int p = 1 + static_cast<int>(g() % n);
    const bool ct = t % 2 == 0;
    MatrixXd A = ct ? cftest::random_hurwitz_realish(g, n)
                    : cftest::random_schur_realish(g, n);
    MatrixXd C = cftest::observable_C(g, A, p);
    auto family = [&](double a) {
      return ct ? lyap_ct_operator(A, C, a) : lyap_dt_operator(A, C, a);
    };
    const double alpha_star =
        (ct ? solve_lyap_ct(A, C) : solve_lyap_dt(A, C)).alpha;
    std::vector<SweepPoint> pts = sweep_alpha(
        family, geometric_grid(alpha_star / 3.0, alpha_star * 3.0, 20));
    std::optional<double> prev;
    int resolved = 0;
    for (const auto& pt : pts) {
      if (!pt.eigenvalue) continue;
      ++resolved;
      if (prev) {
        c.expect(*pt.eigenvalue >= *prev - 1e-9,
                 "eigenvalue dip at alpha " + fmt(pt.alpha) + " trial " +
                     std::to_string(t));
      }
      prev = pt.eigenvalue;
    }
    c.expect(resolved == 20,
             "only " + std::to_string(resolved) + "/20 points resolved, trial " +
                 std::to_string(t));
  }

  // Scalar CT family: eigenvalue(alpha) = alpha - 2 exactly.
  {
    auto family = [](double a) { return lyap_ct_operator(mat1(-1), mat1(1), a); };
    for (const auto& pt : sweep_alpha(family, geometric_grid(1e-2, 1e2, 20))) {
      c.expect(pt.eigenvalue &&
                   std::abs(*pt.eigenvalue - (pt.alpha - 2.0)) <= 1e-10,
               "scalar CT curve off at alpha " + fmt(pt.alpha));
    }
  }
  // Scalar DT family: eigenvalue(alpha) = 1/4 + alpha exactly.
  {
    auto family = [](double a) { return lyap_dt_operator(mat1(0.5), mat1(1), a); };
    for (const auto& pt : sweep_alpha(family, geometric_grid(1e-2, 1e2, 20))) {
      c.expect(pt.eigenvalue &&
                   std::abs(*pt.eigenvalue - (0.25 + pt.alpha)) <= 1e-10,
               "scalar DT curve off at alpha " + fmt(pt.alpha));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 7. Uniqueness across random interior starts (Facts 1-4).
Check criterion7() {
  Check c;
  std::mt19937_64 g(777777);
  for (int inst = 0; inst < 2 && c.ok; ++inst) {
    const int n = 3 + inst;
    const int p = 1 + static_cast<int>(g() % n);
    const int m = 1 + static_cast<int>(g() % n);

    std::vector<std::function<SolveReport(const SolveOptions&)>> solvers;
    MatrixXd Act = cftest::random_hurwitz(g, n);
    MatrixXd Cct = cftest::observable_C(g, Act, p);
    solvers.push_back([=](const SolveOptions& o) { return solve_lyap_ct(Act, Cct, o); });

    MatrixXd Adt = cftest::random_schur(g, n);
    MatrixXd Cdt = cftest::observable_C(g, Adt, p);
    solvers.push_back([=](const SolveOptions& o) { return solve_lyap_dt(Adt, Cdt, o); });

    cftest::RiccatiInstance rdt =
        cftest::random_riccati(g, n, m, p, TimeDomain::DT);
    solvers.push_back([=](const SolveOptions& o) {
      return solve_riccati_dt(
          RiccatiProblem(rdt.A, rdt.B, rdt.R, rdt.C, TimeDomain::DT), o);
    });

    cftest::RiccatiInstance rct =
        cftest::random_riccati(g, n, m, p, TimeDomain::CT);
    solvers.push_back([=](const SolveOptions& o) {
      return solve_riccati_ct(
          RiccatiProblem(rct.A, rct.B, rct.R, rct.C, TimeDomain::CT), o);
    });

    for (size_t sidx = 0; sidx < solvers.size() && c.ok; ++sidx) {
      std::vector<MatrixXd> sols;
      for (int start = 0; start < 10; ++start) {
        SolveOptions o;
        o.record_trace = false;
        o.x0 = ConePoint::psd(cftest::random_spd(g, n, 0.1));
        SolveReport r = solvers[sidx](o);
        c.expect(r.solution_sym().min_eigenvalue() > 0,
                 "solution not PD, solver " + std::to_string(sidx));
        sols.push_back(r.solution_sym().mat());
      }
      for (size_t i = 0; i < sols.size(); ++i) {
        for (size_t j = i + 1; j < sols.size(); ++j) {
          const double d = (sols[i] - sols[j]).norm() / sols[i].norm();
          c.expect(d <= 1e-7, "starts disagree by " + fmt(d) + ", solver " +
                                  std::to_string(sidx));
        }
      }
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 8. Structural properties: homogeneity, order, concavity, super-additivity.
Check criterion8() {
  Check c;
  std::mt19937_64 g(888888);
  const int trials = 200;

  auto psd_shift = [&](int n) {
    MatrixXd W = gaussian(g, n, n);
    return SymMatrix(W * W.transpose() / n);
  };

  int viol_hom = 0, viol_order = 0, viol_concave = 0, viol_super = 0,
      viol_shrink = 0, viol_schur = 0, viol_bell = 0;

  for (int t = 0; t < trials; ++t) {
    const int n = 2 + static_cast<int>(g() % 4);
    const int p = 1 + static_cast<int>(g() % n);
    const int m = 1 + static_cast<int>(g() % n);

    // Linear Lyapunov operators: homogeneity of both; order preservation of
    // the DT map directly and of the CT flow map over a finite horizon (the
    // generator itself is not a cone map, its semigroup is).
    {
      MatrixXd A = gaussian(g, n, n);
      MatrixXd C = gaussian(g, p, n);
      for (double a : {0.3, 2.0}) {
        ConeOperator ct_gen = lyap_ct_operator(A, C, a);
        ConeOperator dt_map = lyap_dt_operator(A, C, a);
        ConePoint x = ConePoint::psd(psd_shift(n));
        for (double s : {0.5, 3.0}) {
          if (homogeneity_defect(ct_gen, x, s) > 1e-12) ++viol_hom;
          if (homogeneity_defect(dt_map, x, s) > 1e-12) ++viol_hom;
        }
        SymMatrix X = psd_shift(n);
        MatrixXd W = gaussian(g, n, n);
        SymMatrix Y(X.mat() + W * W.transpose() / n);
        SymMatrix dF(dt_map.apply(ConePoint::psd(Y)).sym().mat() -
                     dt_map.apply(ConePoint::psd(X)).sym().mat());
        if (dF.min_eigenvalue() < -1e-10) ++viol_order;
        SymMatrix fy = integrate_flow(ct_gen, ConePoint::psd(Y), 0.5).sym();
        SymMatrix fx = integrate_flow(ct_gen, ConePoint::psd(X), 0.5).sym();
        if (SymMatrix(fy.mat() - fx.mat()).min_eigenvalue() < -1e-10) {
          ++viol_order;
        }
      }
    }

    // DT Riccati map: homogeneity, order, concavity, super-additivity.
    {
      cftest::RiccatiInstance inst =
          cftest::random_riccati(g, n, m, p, TimeDomain::DT);
      RiccatiProblem prob(inst.A, inst.B, inst.R, inst.C, TimeDomain::DT);
      const double a = 0.8;
      SymMatrix X = psd_shift(n);
      SymMatrix Y = psd_shift(n);
      // homogeneity
      SymMatrix f2x = riccati_dt_map(prob, a, X.scaled(2.0));
      SymMatrix fx = riccati_dt_map(prob, a, X);
      if ((f2x.mat() - 2.0 * fx.mat()).norm() >
          1e-12 * std::max(1.0, fx.mat().norm())) {
        ++viol_hom;
      }
      // order preservation: X <= X + Y
      SymMatrix fy(SymMatrix(X.mat() + Y.mat()));
      SymMatrix dF(riccati_dt_map(prob, a, fy).mat() - fx.mat());
      if (dF.min_eigenvalue() < -1e-10) ++viol_order;
      // concavity
      for (double th : {0.25, 0.5, 0.75}) {
        SymMatrix mix(th * X.mat() + (1.0 - th) * Y.mat());
        SymMatrix lhs = riccati_dt_map(prob, a, mix);
        SymMatrix fX = riccati_dt_map(prob, a, X);
        SymMatrix fY = riccati_dt_map(prob, a, Y);
        SymMatrix gap(lhs.mat() - th * fX.mat() - (1.0 - th) * fY.mat());
        if (gap.min_eigenvalue() < -1e-10) ++viol_concave;
      }
      // super-additivity
      SymMatrix sum(X.mat() + Y.mat());
      SymMatrix gap(riccati_dt_map(prob, a, sum).mat() -
                    riccati_dt_map(prob, a, X).mat() -
                    riccati_dt_map(prob, a, Y).mat());
      if (gap.min_eigenvalue() < -1e-10) ++viol_super;

      // schur_shrink: PSD, dominated by X, order-preserving, kernel-safe.
      SymMatrix S = schur_shrink(X, inst.B, inst.R, 1.0);
      if (S.min_eigenvalue() < -1e-10) ++viol_shrink;
      if (SymMatrix(X.mat() - S.mat()).min_eigenvalue() < -1e-10) ++viol_shrink;
      SymMatrix Sy = schur_shrink(SymMatrix(X.mat() + Y.mat()), inst.B,
                                  inst.R, 1.0);
      if (SymMatrix(Sy.mat() - S.mat()).min_eigenvalue() < -1e-10) {
        ++viol_shrink;
      }
    }

    // Block Schur complement monotonicity on ordered PSD pairs.
    {
      const int nb = 4;
      SymMatrix Q = cftest::random_spd(g, nb, 0.2);
      MatrixXd W = gaussian(g, nb, nb);
      SymMatrix P(Q.mat() + W * W.transpose() / nb);
      auto schur_c = [](const SymMatrix& M) {
        const MatrixXd& X = M.mat();
        MatrixXd X11 = X.topLeftCorner(2, 2);
        MatrixXd X12 = X.topRightCorner(2, 2);
        MatrixXd X22 = X.bottomRightCorner(2, 2);
        return MatrixXd(X11 -
                        X12 * X22.completeOrthogonalDecomposition().solve(
                                  X12.transpose()));
      };
      MatrixXd gap = schur_c(P) - schur_c(Q);
      gap = 0.5 * (gap + gap.transpose());
      if (SymMatrix(gap).min_eigenvalue() < -1e-10) ++viol_schur;
      if (SymMatrix(schur_c(Q)).min_eigenvalue() < -1e-10) ++viol_schur;
    }

    // Bellman map: order preservation and super-additivity on the orthant.
    {
      cftest::BellmanInstance inst = cftest::random_bellman(g, n, m);
      BellmanProblem prob(inst.A, inst.B, inst.E, inst.s, inst.r);
      const double a = 0.5;
      VectorXd x = cftest::positive_vector(g, n);
      VectorXd y = cftest::positive_vector(g, n);
      VectorXd fx = bellman_map(prob, a, x);
      // homogeneity
      if ((bellman_map(prob, a, 3.0 * x) - 3.0 * fx).lpNorm<Eigen::Infinity>() >
          1e-12 * std::max(1.0, fx.lpNorm<Eigen::Infinity>())) {
        ++viol_hom;
      }
      // order: x <= x + y
      if (((bellman_map(prob, a, x + y) - fx).array() < -1e-10).any()) {
        ++viol_bell;
      }
      // super-additivity
      VectorXd gap = bellman_map(prob, a, x + y) - fx - bellman_map(prob, a, y);
      if ((gap.array() < -1e-10).any()) ++viol_super;
    }
  }

  c.expect(viol_hom == 0, std::to_string(viol_hom) + " homogeneity violations");
  c.expect(viol_order == 0, std::to_string(viol_order) + " order violations");
  c.expect(viol_concave == 0,
           std::to_string(viol_concave) + " concavity violations");
  c.expect(viol_super == 0,
           std::to_string(viol_super) + " super-additivity violations");
  c.expect(viol_shrink == 0,
           std::to_string(viol_shrink) + " schur_shrink violations");
  c.expect(viol_schur == 0,
           std::to_string(viol_schur) + " block Schur violations");
  c.expect(viol_bell == 0,
           std::to_string(viol_bell) + " Bellman order violations");
  return c;
}

// ---------------------------------------------------------------------------
// 9. CLI contract.
Check criterion9() {
  Check c;
  const std::string cli = CONEFLOW_CLI_PATH;
  char tmpl[] = "/tmp/coneflow_accept_XXXXXX";
  const std::string dir = mkdtemp(tmpl);

  auto write_file = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir + "/" + name);
    out << text;
    return dir + "/" + name;
  };
  auto run = [&](const std::string& cmd) {
    const int rc = std::system((cmd + " > " + dir + "/stdout 2> " + dir +
                                "/stderr")
                                   .c_str());
    return WEXITSTATUS(rc);
  };
  auto slurp = [&](const std::string& name) {
    std::ifstream in(dir + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  const std::string scalar =
      write_file("lyap_ct.json", R"({"kind":"lyap_ct","A":[[-1]],"C":[[1]]})");
  int rc = run(cli + " solve " + scalar + " --oracle-check");
  c.expect(rc == 0, "scalar solve exit " + std::to_string(rc));
  {
    nlohmann::json rep = nlohmann::json::parse(slurp("stdout"));
    c.expect(std::abs(rep["solution"][0][0].get<double>() - 0.5) <= 1e-8,
             "scalar solution off");
    c.expect(rep["oracle_delta"].get<double>() < 1e-9, "oracle_delta too big");
  }

  const std::string unobs = write_file(
      "lyap_ct_unobservable.json",
      R"({"kind":"lyap_ct","A":[[-1,0],[0,-2]],"C":[[1,0]]})");
  rc = run(cli + " solve " + unobs);
  c.expect(rc == 2, "unobservable exit " + std::to_string(rc));
  c.expect(slurp("stderr").find("observable") != std::string::npos,
           "message does not cite observability");

  const std::string dts = write_file(
      "lyap_dt_scalar.json", R"({"kind":"lyap_dt","A":[[0.5]],"C":[[1]]})");
  rc = run(cli + " sweep " + dts +
           " --alpha-min 0.25 --alpha-max 0.75 --points 3");
  c.expect(rc == 0, "sweep exit " + std::to_string(rc));
  {
    std::istringstream rows(slurp("stdout"));
    std::string line;
    std::getline(rows, line);
    c.expect(line == "alpha,eigenvalue", "sweep header '" + line + "'");
    const double want[3][2] = {{0.25, 0.5}, {0.5, 0.75}, {0.75, 1.0}};
    for (auto& w : want) {
      std::getline(rows, line);
      const auto comma = line.find(',');
      c.expect(comma != std::string::npos &&
                   std::abs(std::stod(line.substr(0, comma)) - w[0]) <= 1e-12 &&
                   std::abs(std::stod(line.substr(comma + 1)) - w[1]) <= 1e-9,
               "sweep row '" + line + "'");
    }
  }

  // Trace file parses with strictly increasing step indices.
  rc = run(cli + " solve " + scalar + " --trace " + dir + "/trace.csv");
  c.expect(rc == 0, "trace solve exit " + std::to_string(rc));
  {
    std::ifstream tr(dir + "/trace.csv");
    std::string line;
    std::getline(tr, line);
    c.expect(line == "step,alpha,eig_estimate,hilbert_step,residual,min_eig",
             "trace header '" + line + "'");
    int prev = 0, rows = 0;
    while (std::getline(tr, line)) {
      const int step = std::stoi(line.substr(0, line.find(',')));
      c.expect(step > prev, "trace steps not increasing");
      prev = step;
      ++rows;
    }
    c.expect(rows >= 1, "empty trace");
  }
  return c;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<Check()> fn;
  };
  const std::vector<Entry> criteria = {
      {"1. closed-form scalar regression", criterion1},
      {"2. oracle equivalence on random systems", criterion2},
      {"3. residual suite", criterion3},
      {"4. positivity from rank-1 starts", criterion4},
      {"5. Hilbert contraction at the crossing", criterion5},
      {"6. monotone eigenvalue curves", criterion6},
      {"7. uniqueness across starts", criterion7},
      {"8. structural property suite", criterion8},
      {"9. CLI contract", criterion9},
  };

  int failed = 0;
  for (const auto& entry : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = entry.fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("%s  %s (%.1fs)%s%s\n", c.ok ? "PASS" : "FAIL", entry.name,
                secs, c.detail.empty() ? "" : " -- ", c.detail.c_str());
    if (!c.ok) ++failed;
  }
  return failed;
}
