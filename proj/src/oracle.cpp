#include "antiplane/oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace antiplane {
namespace oracle {

Eigen::VectorXd brute_sign_pattern(const DenseInstance& inst) {
  const Eigen::Index n = inst.A.rows();
  if (inst.A.cols() != n || inst.f.size() != n || inst.tau.size() != n)
    throw OracleError("instance shape mismatch");
  std::vector<Eigen::Index> thresholded;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (inst.tau[i] < 0.0) throw OracleError("negative threshold");
    if (inst.tau[i] > 0.0) thresholded.push_back(i);
  }
  if (thresholded.size() > 12) throw OracleError("more than 12 thresholded dofs");

  long patterns = 1;
  for (size_t k = 0; k < thresholded.size(); ++k) patterns *= 3;

  Eigen::VectorXd best;
  double best_violation = std::numeric_limits<double>::infinity();

  std::vector<int> sign(n, 2);  // 2 = unthresholded (always active, no shift)
  for (long code = 0; code < patterns; ++code) {
    long c = code;
    for (Eigen::Index i : thresholded) {
      sign[i] = static_cast<int>(c % 3) - 1;  // -1, 0, +1
      c /= 3;
    }
    // active set: unthresholded dofs plus thresholded dofs with sign != 0
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < n; ++i)
      if (sign[i] != 0) active.push_back(i);

    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    if (!active.empty()) {
      Eigen::MatrixXd Ar(active.size(), active.size());
      Eigen::VectorXd fr(active.size());
      for (size_t a = 0; a < active.size(); ++a) {
        fr[a] = inst.f[active[a]];
        if (sign[active[a]] != 2) fr[a] -= inst.tau[active[a]] * sign[active[a]];
        for (size_t b = 0; b < active.size(); ++b) Ar(a, b) = inst.A(active[a], active[b]);
      }
      Eigen::LLT<Eigen::MatrixXd> llt(Ar);
      if (llt.info() != Eigen::Success) throw OracleError("reduced system not SPD");
      Eigen::VectorXd vr = llt.solve(fr);
      for (size_t a = 0; a < active.size(); ++a) v[active[a]] = vr[a];
    }
    // consistency: sign agreement on sliding dofs, stick condition elsewhere
    Eigen::VectorXd r = inst.f - inst.A * v;
    double violation = 0.0;
    for (Eigen::Index i : thresholded) {
      if (sign[i] == 0)
        violation = std::max(violation, std::abs(r[i]) - inst.tau[i]);
      else
        violation = std::max(violation, -static_cast<double>(sign[i]) * v[i]);
    }
    if (violation <= 1e-12) return v;
    if (violation < best_violation) {
      best_violation = violation;
      best = v;
    }
  }
  throw OracleError("no consistent sign pattern (best violation " +
                    std::to_string(best_violation) + ")");
}

double scalar_e3_solution(double beta0, double lambda, double u_const, double t) {
  if (!(beta0 > 0.0)) throw OracleError("scalar_e3_solution needs beta0 > 0");
  if (lambda < 0.0 || t < 0.0) throw OracleError("negative lambda or t");
  const double target = std::log(beta0) + beta0 - lambda * u_const * u_const * t;
  auto phi = [&](double b) { return std::log(b) + b - target; };
  if (phi(beta0) <= 0.0) return beta0;  // t = 0 or lambda u^2 = 0
  double hi = beta0, lo = 0.5 * beta0;
  while (phi(lo) > 0.0) {  // phi is strictly increasing with root in (0, beta0)
    hi = lo;
    lo *= 0.5;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (phi(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double fd_gradient_check(const DenseInstance& inst, const Eigen::VectorXd& point, double h) {
  const Eigen::Index n = inst.A.rows();
  if (point.size() != n) throw OracleError("point shape mismatch");
  for (Eigen::Index i = 0; i < n; ++i)
    if (inst.tau[i] > 0.0 && std::abs(point[i]) <= 10.0 * h)
      throw OracleError("point too close to the kink at dof " + std::to_string(i));
  auto J = [&](const Eigen::VectorXd& v) {
    double e = 0.5 * v.dot(inst.A * v) - inst.f.dot(v);
    for (Eigen::Index i = 0; i < n; ++i) e += inst.tau[i] * std::abs(v[i]);
    return e;
  };
  Eigen::VectorXd grad = inst.A * point - inst.f;
  for (Eigen::Index i = 0; i < n; ++i)
    if (inst.tau[i] > 0.0) grad[i] += inst.tau[i] * (point[i] > 0 ? 1.0 : -1.0);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd p = point, m = point;
    p[i] += h;
    m[i] -= h;
    double fd = (J(p) - J(m)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - grad[i]) / std::max(1.0, std::abs(grad[i])));
  }
  return worst;
}

}  // namespace oracle
}  // namespace antiplane
