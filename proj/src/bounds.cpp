#include "antiplane/bounds.hpp"

#include <cmath>
#include <limits>

namespace antiplane {

double compute_K(double mu_star, const HypothesisConstants& c, const DataNorms& n,
                 double c0_hat) {
  if (!(mu_star > 0.0)) throw LawError("compute_K: mu_star must be positive");
  return (c.c0phi_g + n.f0_inf + n.fN_inf + c.c1phi_g * n.beta_inf +
          c.c2phi_g * c0_hat * n.xi_inf + c.c1phi_a * c0_hat * n.beta_inf * n.beta_inf * n.xi_inf) /
         mu_star;
}

double apriori_H1_rhs(double mu_star, const HypothesisConstants& c, const DataNorms& n,
                      double c0_hat) {
  if (!(mu_star > 0.0)) throw LawError("apriori_H1_rhs: mu_star must be positive");
  return (c.c1phi_g * c0_hat / mu_star) * n.beta_inf + (c.c2phi_g * c0_hat / mu_star) * n.xi_h1 +
         (c.c1phi_a * c0_hat / mu_star) * n.beta_inf * n.beta_inf * n.xi_h1 +
         (1.0 + n.f0_inf + n.fN_inf);
}

GronwallResult gronwall_beta_rhs(double beta0_norm, double c0beta, double c3beta_times_c0,
                                 double u_inf_norm, double T) {
  GronwallResult res;
  const double a = c3beta_times_c0 * T * u_inf_norm * u_inf_norm;
  if (a > 700.0) {  // exp would overflow a double
    res.overflow = true;
    res.value = std::numeric_limits<double>::infinity();
    return res;
  }
  const double factor = 1.0 + a * std::exp(a);
  res.value = beta0_norm * factor + c0beta * T * factor;
  return res;
}

BetaBoxResult verify_beta_box(const BetaTrajectory& traj) {
  BetaBoxResult res;
  res.box_ok = true;
  res.monotone_ok = true;
  const double tol = 1e-12;
  for (const auto& field : traj) {
    for (double b : field.values) {
      double viol = std::max(-b, b - 1.0);
      if (viol > tol) {
        res.box_ok = false;
        res.worst_violation = std::max(res.worst_violation, viol);
      }
    }
  }
  for (size_t k = 1; k < traj.size(); ++k)
    for (size_t i = 0; i < traj[k].values.size(); ++i) {
      double rise = traj[k].values[i] - traj[k - 1].values[i];
      if (rise > tol) res.monotone_ok = false;
    }
  return res;
}

}  // namespace antiplane
