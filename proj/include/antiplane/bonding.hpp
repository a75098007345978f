#pragma once

#include "antiplane/fem.hpp"
#include "antiplane/laws.hpp"

namespace antiplane {

struct BondingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimeGrid {
  double T = 1.0;
  int n_steps = 1;

  TimeGrid() = default;
  TimeGrid(double horizon, int steps) : T(horizon), n_steps(steps) {
    if (!(T > 0.0) || n_steps < 1) throw BondingError("invalid time grid");
  }
  int n_nodes() const { return n_steps + 1; }
  double dt() const { return T / n_steps; }
  double node(int k) const { return k * T / n_steps; }
};

/// One BoundaryField per time node; trajectory[0] is the initial bonding
/// field exactly.
using BetaTrajectory = std::vector<BoundaryField>;
using TraceTrajectory = std::vector<BoundaryField>;  // u restricted to Gamma_C

struct PicardResult {
  BetaTrajectory beta;
  int iterations = 0;
  double fitted_ratio = 0.0;  // geometric decay of the Picard error, if seen
  bool clipped = false;
};

struct PicardOptions {
  double tol = 1e-12;
  int max_iter = 200;
  bool clip_beta_box = false;  // project onto [0,1]; exploratory runs only
  const Mesh* mesh = nullptr;  // with dofs: enables the L2(Gamma_C) stopping
  const DofMap* dofs = nullptr;  // metric; falls back to max norm otherwise
};

/// Fixed-point iteration on the integral form beta = beta0 + int H(beta, u),
/// composite trapezoid per contact vertex, until the max-over-nodes change
/// is below tol. Contraction is certified in the exponentially weighted norm
/// max_k exp(-omega t_k) ||dbeta(t_k)|| with omega twice the empirical
/// Lipschitz factor of H in beta.
PicardResult picard_solve(const BoundaryField& beta0, const TraceTrajectory& u_traj,
                          const AdhesionSpec& adh, const TimeGrid& grid,
                          const PicardOptions& opts = {});

/// Classical 4-stage integrator, u linearly interpolated between nodes;
/// independent cross-check for picard_solve.
BetaTrajectory rk4_integrate(const BoundaryField& beta0, const TraceTrajectory& u_traj,
                             const AdhesionSpec& adh, const TimeGrid& grid);

/// Safe horizon T_safe = min(beta0) / (2 ||lambda|| max_k ||u(t_k)||_inf^2);
/// infinity when the denominator vanishes.
double safe_horizon(const BoundaryField& beta0, const TraceTrajectory& u_traj,
                    const AdhesionSpec& adh);

}  // namespace antiplane
