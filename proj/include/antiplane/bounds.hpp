#pragma once

#include "antiplane/bonding.hpp"
#include "antiplane/laws.hpp"

namespace antiplane {

/// A priori estimates of the analysis evaluated as computable diagnostics.
/// Universal constants are unknowable, so everything here is a reported
/// ratio, never an asserted absolute bound.
struct BoundsReport {
  double apriori_H1_rhs = 0.0;
  double K_value = 0.0;
  double linf_ratio = 0.0;  // ||u||_inf / K
  double gronwall_rhs = 0.0;
  bool gronwall_overflow = false;
  bool beta_box_ok = false;
  bool beta_monotone_ok = false;
  double beta_worst_violation = 0.0;
};

struct DataNorms {
  double f0_inf = 0.0;
  double fN_inf = 0.0;
  double beta_inf = 0.0;   // ||beta||_{Linf_T Linf(Gamma_C)}
  double xi_inf = 0.0;     // ||xi||_{Linf_T Linf(Omega)}
  double xi_h1 = 0.0;      // ||xi||_{Linf_T H1(Omega)}
};

/// K = (1/mu_star)(c0 + ||f0|| + ||fN|| + c1||beta|| + c2 c0_hat ||xi||
///     + c1a c0_hat ||beta||^2 ||xi||), the sup-norm bound constant.
double compute_K(double mu_star, const HypothesisConstants& consts, const DataNorms& norms,
                 double c0_hat);

/// Structured right-hand side of the H1 a priori estimate with the universal
/// constant set to 1; used as a ratio denominator for ||u||_H1.
double apriori_H1_rhs(double mu_star, const HypothesisConstants& consts, const DataNorms& norms,
                      double c0_hat);

struct GronwallResult {
  double value = 0.0;
  bool overflow = false;
};

/// ||beta0||(1 + cTU^2 e^{cTU^2}) + c0b T (1 + cTU^2 e^{cTU^2}) with
/// c = c3beta * c0_hat and U = ||u||_inf. Overflow is flagged, not thrown.
GronwallResult gronwall_beta_rhs(double beta0_norm, double c0beta, double c3beta_times_c0,
                                 double u_inf_norm, double T);

struct BetaBoxResult {
  bool box_ok = false;
  bool monotone_ok = false;
  double worst_violation = 0.0;
};

/// Box check against [0,1] with 1e-12 slack; per-vertex monotonicity check
/// (meaningful for the decaying laws; the caller decides whether to assert
/// it for E1 with a positive restoration rate).
BetaBoxResult verify_beta_box(const BetaTrajectory& traj);

}  // namespace antiplane
