#include "antiplane/scheme.hpp"

#include <cmath>

namespace antiplane {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::Diverged: return "diverged";
    case Termination::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

SmallnessReport check_smallness(double mu_star, const HypothesisConstants& consts,
                                const BoundaryField& beta0, double c0_hat) {
  if (!(mu_star > 0.0)) throw SchemeError("check_smallness: mu_star must be positive");
  SmallnessReport rep;
  rep.mu_star = mu_star;
  rep.c2phi_g = consts.c2phi_g;
  rep.c1phi_a = consts.c1phi_a;
  rep.c0_hat = c0_hat;
  for (double b : beta0.values) rep.beta0_inf = std::max(rep.beta0_inf, std::abs(b));
  rep.delta_hat =
      (consts.c2phi_g * c0_hat + consts.c1phi_a * c0_hat * rep.beta0_inf * rep.beta0_inf) /
      mu_star;
  rep.pass = rep.delta_hat < 1.0;
  return rep;
}

namespace {

struct SchemeWorkspace {
  SparseSymMatrix stiffness;
  std::vector<double> weights;
  std::vector<LoadVector> base_loads;  // per node, with the Dirichlet lift applied
};

SchemeWorkspace prepare(const ProblemSetup& setup, const SchemeConfig& config) {
  if (!setup.mesh || !setup.dofs) throw SchemeError("setup missing mesh/dofs");
  if (setup.beta0.values.size() != setup.dofs->contact_vertices.size())
    throw SchemeError("beta0 size does not match the contact vertex list");
  for (double m : setup.mu)
    if (!(m >= setup.mu_star) || !(setup.mu_star > 0.0))
      throw SchemeError("mu must dominate mu_star > 0 on every triangle");
  SchemeWorkspace ws;
  ws.stiffness = assemble_stiffness(*setup.mesh, setup.mu, *setup.dofs);
  ws.weights = boundary_weights(*setup.mesh, *setup.dofs);
  const int nn = config.grid.n_nodes();
  ws.base_loads.reserve(nn);
  for (int k = 0; k < nn; ++k) {
    LoadVector b = setup.load_at(k);
    if (!setup.dirichlet.empty())
      apply_dirichlet_lift(*setup.mesh, setup.mu, *setup.dofs, setup.dirichlet, b);
    ws.base_loads.push_back(std::move(b));
  }
  return ws;
}

ScalarField with_lift(const LoadVector& u_free, const ProblemSetup& setup) {
  ScalarField f = expand_free(u_free, *setup.dofs);
  if (!setup.dirichlet.empty())
    for (int v = 0; v < setup.dofs->n_vertices; ++v)
      if (setup.dofs->constrained(v)) f.values[v] = setup.dirichlet[v];
  return f;
}

std::vector<double> friction_thresholds(const ProblemSetup& setup,
                                        const std::vector<double>& weights,
                                        const BoundaryField& u_trace,
                                        const BoundaryField& beta) {
  std::vector<double> tau(weights.size());
  for (size_t i = 0; i < weights.size(); ++i)
    tau[i] = weights[i] * eval_g(setup.fric, std::abs(u_trace.values[i]), beta.values[i]);
  return tau;
}

}  // namespace

CoupledSolution run_coupled(const ProblemSetup& setup, const SchemeConfig& config) {
  SchemeWorkspace ws = prepare(setup, config);
  const int nn = config.grid.n_nodes();
  const DofMap& dofs = *setup.dofs;

  CoupledSolution sol;
  sol.report.c0_hat = estimate_trace_constant(*setup.mesh, dofs).c0_hat;
  sol.report.smallness =
      check_smallness(setup.mu_star, derive_constants(setup.fric, setup.adh), setup.beta0,
                      sol.report.c0_hat);

  // iterate 0
  std::vector<ScalarField> u_prev(nn);
  for (int k = 0; k < nn; ++k) {
    u_prev[k] = config.u0 ? config.u0->at(static_cast<size_t>(k)) : zero_field(*setup.mesh);
    u_prev[k].time_index = k;
  }
  BetaTrajectory beta_prev(nn, setup.beta0);
  for (int k = 0; k < nn; ++k) beta_prev[k].time_index = k;

  PicardOptions popts;
  popts.tol = 0.1 * config.tol_outer;
  popts.max_iter = 500;
  popts.clip_beta_box = config.clip_beta_box;
  popts.mesh = setup.mesh;
  popts.dofs = setup.dofs;

  double prev_eu = -1.0;
  int bad_ratios = 0;

  for (int outer = 1; outer <= config.max_outer; ++outer) {
    // (a) frozen friction/adhesion inner solve, each time node independent
    std::vector<ScalarField> u_next(nn);
    std::string inner_error;
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < nn; ++k) {
      try {
        BoundaryField trace_prev = trace_restrict(u_prev[k], dofs);
        InnerProblem prob;
        prob.stiffness = &ws.stiffness;
        prob.load = fold_adhesion(ws.base_loads[k], dofs, ws.weights, setup.adh.lambda,
                                  beta_prev[k], trace_prev);
        prob.tau =
            scatter_contact(dofs, friction_thresholds(setup, ws.weights, trace_prev, beta_prev[k]));
        LoadVector warm = restrict_free(u_prev[k], dofs);
        ViSolution vi =
            solve_inner(prob, config.tol_inner, config.max_inner, config.inner_method, &warm);
        u_next[k] = with_lift(vi.u, setup);
        u_next[k].time_index = k;
      } catch (const std::exception& e) {
#pragma omp critical
        inner_error = "time node " + std::to_string(k) + ": " + e.what();
      }
    }
    if (!inner_error.empty()) {
      // blowing past the inner budget mid-scheme is an iteration breakdown,
      // not an input error; report it as divergence with the diagnostics
      sol.report.termination = Termination::Diverged;
      sol.report.message =
          "inner solver breakdown at " + inner_error +
          (sol.report.smallness.pass ? " (smallness passed)" : " (smallness FAILED)");
      break;
    }

    // (b) bonding field over the whole grid from the new displacements
    TraceTrajectory traces(nn);
    for (int k = 0; k < nn; ++k) traces[k] = trace_restrict(u_next[k], dofs);
    PicardResult pic;
    try {
      pic = picard_solve(setup.beta0, traces, setup.adh, config.grid, popts);
    } catch (const std::exception& e) {
      sol.report.termination = Termination::Diverged;
      sol.report.message =
          std::string("bonding integration breakdown: ") + e.what() +
          (sol.report.smallness.pass ? " (smallness passed)" : " (smallness FAILED)");
      break;
    }
    sol.report.T_safe = safe_horizon(setup.beta0, traces, setup.adh);

    // (c) Cauchy increments and contraction monitoring
    OuterIteration it;
    for (int k = 0; k < nn; ++k) {
      ScalarField du = u_next[k];
      for (size_t v = 0; v < du.values.size(); ++v) du.values[v] -= u_prev[k].values[v];
      it.e_u = std::max(it.e_u, field_norm(*setup.mesh, du, NormKind::H1_Omega));
      BoundaryField db = pic.beta[k];
      for (size_t i = 0; i < db.values.size(); ++i) db.values[i] -= beta_prev[k].values[i];
      it.e_beta = std::max(it.e_beta, boundary_norm(*setup.mesh, dofs, db, NormKind::L2_GammaC));
    }
    if (prev_eu > 10.0 * config.tol_outer) {
      it.ratio = it.e_u / prev_eu;
      it.ratio_recorded = true;
      bad_ratios = (it.ratio >= 1.0) ? bad_ratios + 1 : 0;
    }
    prev_eu = it.e_u;
    sol.report.history.push_back(it);

    u_prev = std::move(u_next);
    beta_prev = std::move(pic.beta);

    if (it.e_u + it.e_beta <= config.tol_outer) {
      sol.report.termination = Termination::Converged;
      sol.report.message = "converged after " + std::to_string(outer) + " outer iterations";
      break;
    }
    if (bad_ratios >= 3) {
      sol.report.termination = Termination::Diverged;
      sol.report.message =
          "three consecutive non-contracting ratios (delta_hat = " +
          std::to_string(sol.report.smallness.delta_hat) +
          (sol.report.smallness.pass ? ", smallness passed" : ", smallness FAILED") + ")";
      break;
    }
    if (outer == config.max_outer) {
      sol.report.termination = Termination::BudgetExceeded;
      sol.report.message = "outer budget of " + std::to_string(config.max_outer) + " exhausted";
    }
  }

  sol.u = std::move(u_prev);
  sol.beta = std::move(beta_prev);

  if (sol.report.termination == Termination::Converged) {
    // post-hoc: the limit must solve the inequality with its OWN coefficients
    double worst = 0.0;
    for (int k = 0; k < nn; ++k) {
      BoundaryField trace = trace_restrict(sol.u[k], dofs);
      InnerProblem prob;
      prob.stiffness = &ws.stiffness;
      prob.load =
          fold_adhesion(ws.base_loads[k], dofs, ws.weights, setup.adh.lambda, sol.beta[k], trace);
      prob.tau = scatter_contact(dofs, friction_thresholds(setup, ws.weights, trace, sol.beta[k]));
      worst = std::max(worst, optimality_measure(prob, restrict_free(sol.u[k], dofs)));
    }
    sol.report.self_consistency = worst;
  }
  return sol;
}

UniquenessReport uniqueness_probe(const ProblemSetup& setup, const SchemeConfig& config,
                                  const std::vector<ScalarField>& u0_a,
                                  const std::vector<ScalarField>& u0_b) {
  SchemeConfig ca = config, cb = config;
  ca.u0 = &u0_a;
  cb.u0 = &u0_b;
  UniquenessReport rep;
  rep.run_a = run_coupled(setup, ca);
  rep.run_b = run_coupled(setup, cb);
  if (rep.run_a.report.termination != Termination::Converged ||
      rep.run_b.report.termination != Termination::Converged)
    throw SchemeError("uniqueness probe: a run did not converge");
  const int nn = config.grid.n_nodes();
  for (int k = 0; k < nn; ++k) {
    ScalarField du = rep.run_a.u[k];
    for (size_t v = 0; v < du.values.size(); ++v) du.values[v] -= rep.run_b.u[k].values[v];
    rep.u_distance = std::max(rep.u_distance, field_norm(*setup.mesh, du, NormKind::H1_Omega));
    BoundaryField db = rep.run_a.beta[k];
    for (size_t i = 0; i < db.values.size(); ++i) db.values[i] -= rep.run_b.beta[k].values[i];
    rep.beta_distance = std::max(
        rep.beta_distance, boundary_norm(*setup.mesh, *setup.dofs, db, NormKind::L2_GammaC));
  }
  return rep;
}

ContractionFit fit_contraction(const ConvergenceReport& report) {
  // fit log e_u^n = log c + n log B over iterations with positive increments
  std::vector<std::pair<double, double>> pts;
  for (size_t n = 0; n < report.history.size(); ++n)
    if (report.history[n].e_u > 0.0)
      pts.emplace_back(static_cast<double>(n + 1), std::log(report.history[n].e_u));
  if (pts.size() < 3) throw SchemeError("fit_contraction: need at least 3 recorded iterations");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(pts.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  return {std::exp(slope), std::exp(intercept)};
}

}  // namespace antiplane
