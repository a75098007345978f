#pragma once

#include <optional>
#include <string>

#include "antiplane/bonding.hpp"
#include "antiplane/vi_solver.hpp"

namespace antiplane {

struct SchemeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// delta_hat = (c2 c0_hat + c1a c0_hat ||beta0||_inf^2) / mu_star; the outer
/// iteration is guaranteed to contract when delta_hat < 1.
struct SmallnessReport {
  double mu_star = 0.0;
  double c2phi_g = 0.0;
  double c1phi_a = 0.0;
  double beta0_inf = 0.0;
  double c0_hat = 0.0;
  double delta_hat = 0.0;
  bool pass = false;
};

SmallnessReport check_smallness(double mu_star, const HypothesisConstants& consts,
                                const BoundaryField& beta0, double c0_hat);

/// Everything run_coupled needs about the discretized problem.
struct ProblemSetup {
  const Mesh* mesh = nullptr;
  const DofMap* dofs = nullptr;
  std::vector<double> mu;  // per triangle
  double mu_star = 1.0;
  FrictionSpec fric;
  AdhesionSpec adh;
  std::vector<LoadVector> loads;  // per time node over free dofs; size 1 = constant in time
  BoundaryField beta0;
  std::vector<double> dirichlet;  // nodal lift values; empty = homogeneous

  const LoadVector& load_at(int k) const {
    return loads.size() == 1 ? loads[0] : loads.at(static_cast<size_t>(k));
  }
};

struct SchemeConfig {
  TimeGrid grid;
  double tol_outer = 1e-8;
  int max_outer = 100;
  double tol_inner = 1e-10;
  int max_inner = 50000;
  InnerMethod inner_method = InnerMethod::ShrinkageCD;
  bool clip_beta_box = false;
  const std::vector<ScalarField>* u0 = nullptr;  // per time node; null = zero fields
};

enum class Termination { Converged, Diverged, BudgetExceeded };

struct OuterIteration {
  double e_u = 0.0;     // max_k || u^n - u^{n-1} ||_H1 (sum convention)
  double e_beta = 0.0;  // max_k || beta^n - beta^{n-1} ||_L2(Gamma_C)
  double ratio = 0.0;   // e_u^n / e_u^{n-1}
  bool ratio_recorded = false;
};

struct ConvergenceReport {
  std::vector<OuterIteration> history;
  SmallnessReport smallness;
  double c0_hat = 0.0;
  double T_safe = 0.0;
  Termination termination = Termination::BudgetExceeded;
  std::string message;
  /// Max-over-nodes optimality residual with thresholds rebuilt from the
  /// CONVERGED pair; certifies the limit solves the coupled inequality,
  /// not merely the frozen one. Only filled on convergence.
  double self_consistency = -1.0;
};

struct CoupledSolution {
  std::vector<ScalarField> u;  // per time node
  BetaTrajectory beta;
  ConvergenceReport report;
};

/// Outer fixed-point iteration: freeze (u, beta), solve the inner friction
/// problem per time node (nodes are independent), integrate the bonding
/// field along the whole grid, repeat until the paired Cauchy increments
/// fall below tol_outer. Three consecutive non-contracting ratios abort
/// with Termination::Diverged.
CoupledSolution run_coupled(const ProblemSetup& setup, const SchemeConfig& config);

struct UniquenessReport {
  double u_distance = 0.0;     // max over nodes, H1
  double beta_distance = 0.0;  // max over nodes, L2(Gamma_C)
  CoupledSolution run_a, run_b;
};

UniquenessReport uniqueness_probe(const ProblemSetup& setup, const SchemeConfig& config,
                                  const std::vector<ScalarField>& u0_a,
                                  const std::vector<ScalarField>& u0_b);

struct ContractionFit {
  double B_fit = 0.0;
  double c_fit = 0.0;
};

/// Least-squares fit of log e_u^n against n over the recorded iterations.
ContractionFit fit_contraction(const ConvergenceReport& report);

const char* termination_name(Termination t);

}  // namespace antiplane
