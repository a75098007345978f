#include "antiplane/bonding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace antiplane {

namespace {

void check_shapes(const BoundaryField& beta0, const TraceTrajectory& u_traj,
                  const TimeGrid& grid) {
  if (static_cast<int>(u_traj.size()) != grid.n_nodes())
    throw BondingError("displacement trajectory does not match the time grid");
  for (const auto& u : u_traj)
    if (u.values.size() != beta0.values.size())
      throw BondingError("trace/bonding size mismatch");
}

}  // namespace

PicardResult picard_solve(const BoundaryField& beta0, const TraceTrajectory& u_traj,
                          const AdhesionSpec& adh, const TimeGrid& grid,
                          const PicardOptions& opts) {
  check_shapes(beta0, u_traj, grid);
  if (!(opts.tol > 0.0)) throw BondingError("tol must be positive");
  const int nn = grid.n_nodes();
  const int nc = static_cast<int>(beta0.values.size());
  const double dt = grid.dt();

  PicardResult res;
  res.beta.assign(nn, beta0);
  for (int k = 0; k < nn; ++k) res.beta[k].time_index = k;

  // empirical Lipschitz factor of H in beta: |dH/dbeta| <= lambda u^2
  double u_inf2 = 0.0;
  for (const auto& u : u_traj)
    for (double x : u.values) u_inf2 = std::max(u_inf2, x * x);
  const double omega = 2.0 * adh.lambda_inf() * u_inf2;

  std::vector<double> weights;
  if (opts.mesh && opts.dofs) weights = boundary_weights(*opts.mesh, *opts.dofs);

  auto node_change = [&](const std::vector<double>& d) {
    if (!weights.empty()) {
      double s = 0.0;
      for (int i = 0; i < nc; ++i) s += weights[i] * d[i] * d[i];
      return std::sqrt(s);
    }
    double m = 0.0;
    for (double x : d) m = std::max(m, std::abs(x));
    return m;
  };

  BetaTrajectory next = res.beta;
  std::vector<double> rate(nn), diff(nc);
  double prev_err = -1.0, prev_weighted = -1.0;
  double ratio_acc = 0.0;
  int ratio_count = 0;

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    double err = 0.0, weighted_err = 0.0;
    for (int i = 0; i < nc; ++i) {
      for (int k = 0; k < nn; ++k) {
        rate[k] = eval_H(adh, static_cast<std::size_t>(i), res.beta[k].values[i],
                         u_traj[k].values[i]);
        if (!std::isfinite(rate[k])) throw BondingError("non-finite rate evaluation");
      }
      double integral = 0.0;
      next[0].values[i] = beta0.values[i];
      for (int k = 1; k < nn; ++k) {
        integral += 0.5 * dt * (rate[k - 1] + rate[k]);
        double v = beta0.values[i] + integral;
        if (opts.clip_beta_box) {
          double c = std::clamp(v, 0.0, 1.0);
          if (c != v) res.clipped = true;
          v = c;
        }
        next[k].values[i] = v;
      }
    }
    for (int k = 0; k < nn; ++k) {
      for (int i = 0; i < nc; ++i) diff[i] = next[k].values[i] - res.beta[k].values[i];
      double c = node_change(diff);
      err = std::max(err, c);
      weighted_err = std::max(weighted_err, std::exp(-omega * grid.node(k)) * c);
    }
    std::swap(res.beta, next);
    res.iterations = iter;
    if (prev_err > 10.0 * opts.tol && err > 0.0) {
      ratio_acc += err / prev_err;
      ++ratio_count;
    }
    (void)prev_weighted;
    prev_err = err;
    prev_weighted = weighted_err;
    if (err <= opts.tol) {
      res.fitted_ratio = ratio_count ? ratio_acc / ratio_count : 0.0;
      return res;
    }
  }
  throw BondingError("Picard iteration exceeded max_iter (last change " +
                     std::to_string(prev_err) + ")");
}

BetaTrajectory rk4_integrate(const BoundaryField& beta0, const TraceTrajectory& u_traj,
                             const AdhesionSpec& adh, const TimeGrid& grid) {
  check_shapes(beta0, u_traj, grid);
  const int nn = grid.n_nodes();
  const int nc = static_cast<int>(beta0.values.size());
  const double dt = grid.dt();
  BetaTrajectory traj(nn, beta0);
  for (int k = 0; k < nn; ++k) traj[k].time_index = k;
  for (int i = 0; i < nc; ++i) {
    double b = beta0.values[i];
    for (int k = 0; k + 1 < nn; ++k) {
      const double u0 = u_traj[k].values[i];
      const double u1 = u_traj[k + 1].values[i];
      const double um = 0.5 * (u0 + u1);
      const auto f = [&](double beta, double u) {
        double v = eval_H(adh, static_cast<std::size_t>(i), beta, u);
        if (!std::isfinite(v)) throw BondingError("non-finite stage value");
        return v;
      };
      double k1 = f(b, u0);
      double k2 = f(b + 0.5 * dt * k1, um);
      double k3 = f(b + 0.5 * dt * k2, um);
      double k4 = f(b + dt * k3, u1);
      b += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      traj[k + 1].values[i] = b;
    }
  }
  return traj;
}

double safe_horizon(const BoundaryField& beta0, const TraceTrajectory& u_traj,
                    const AdhesionSpec& adh) {
  double c_tilde = std::numeric_limits<double>::infinity();
  for (double b : beta0.values) c_tilde = std::min(c_tilde, b);
  double u_inf2 = 0.0;
  for (const auto& u : u_traj)
    for (double x : u.values) u_inf2 = std::max(u_inf2, x * x);
  double denom = 2.0 * adh.lambda_inf() * u_inf2;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return c_tilde / denom;
}

}  // namespace antiplane
