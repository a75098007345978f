#include "antiplane/vi_solver.hpp"

#include <cmath>

namespace antiplane {

void InnerProblem::validate() const {
  if (!stiffness) throw ViError("inner problem: missing stiffness");
  const auto n = stiffness->rows();
  if (stiffness->cols() != n) throw ViError("inner problem: non-square stiffness");
  if (load.size() != n || tau.size() != n) throw ViError("inner problem: size mismatch");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(tau[i] >= 0.0)) throw ViError("inner problem: negative threshold");
}

LoadVector scatter_contact(const DofMap& dofs, const std::vector<double>& per_contact_vertex) {
  if (per_contact_vertex.size() != dofs.contact_vertices.size())
    throw ViError("contact vector size mismatch");
  LoadVector out = LoadVector::Zero(dofs.n_free);
  for (size_t i = 0; i < dofs.contact_vertices.size(); ++i) {
    int fi = dofs.free_index[dofs.contact_vertices[i]];
    if (fi >= 0) out[fi] = per_contact_vertex[i];
  }
  return out;
}

LoadVector fold_adhesion(const LoadVector& load, const DofMap& dofs,
                         const std::vector<double>& weights, const std::vector<double>& lambda,
                         const BoundaryField& beta_prev, const BoundaryField& uprev_trace) {
  const size_t nc = dofs.contact_vertices.size();
  if (weights.size() != nc || beta_prev.values.size() != nc || uprev_trace.values.size() != nc)
    throw ViError("fold_adhesion: contact list mismatch");
  LoadVector out = load;
  for (size_t i = 0; i < nc; ++i) {
    int fi = dofs.free_index[dofs.contact_vertices[i]];
    if (fi < 0) continue;
    double lam = lambda.size() == 1 ? lambda[0] : lambda.at(i);
    double b = beta_prev.values[i];
    out[fi] += weights[i] * lam * b * b * uprev_trace.values[i];
  }
  return out;
}

double optimality_measure(const InnerProblem& p, const LoadVector& u) {
  LoadVector r = (*p.stiffness) * u - p.load;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    double c;
    if (p.tau[i] > 0.0) {
      if (u[i] != 0.0)
        c = std::abs(r[i] + p.tau[i] * (u[i] > 0 ? 1.0 : -1.0));
      else
        c = std::max(0.0, std::abs(r[i]) - p.tau[i]);
    } else {
      c = std::abs(r[i]);
    }
    worst = std::max(worst, c);
  }
  return worst;
}

double energy(const InnerProblem& p, const LoadVector& u) {
  double quad = 0.5 * u.dot((*p.stiffness) * u) - p.load.dot(u);
  double nonsmooth = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) nonsmooth += p.tau[i] * std::abs(u[i]);
  return quad + nonsmooth;
}

static double soft_threshold(double r, double tau) {
  if (r > tau) return r - tau;
  if (r < -tau) return r + tau;
  return 0.0;  // stick, including the tie |r| = tau
}

static ViSolution solve_shrinkage_cd(const InnerProblem& p, double tol, int max_iter,
                                     LoadVector u) {
  const auto& A = *p.stiffness;
  const Eigen::Index n = A.rows();
  LoadVector diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    diag[i] = A.coeff(i, i);
    if (!(diag[i] > 0.0)) throw ViError("stiffness diagonal not positive (not SPD)");
  }
  ViSolution sol;
  double last_energy = energy(p, u);
  for (int sweep = 1; sweep <= max_iter; ++sweep) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double off = 0.0;
      for (SparseSymMatrix::InnerIterator it(A, i); it; ++it)
        if (it.col() != i) off += it.value() * u[it.col()];
      double r = p.load[i] - off;
      u[i] = (p.tau[i] > 0.0) ? soft_threshold(r, p.tau[i]) / diag[i] : r / diag[i];
    }
    double e = energy(p, u);
    if (e > last_energy + 1e-12 * (1.0 + std::abs(last_energy)))
      throw ViError("energy increased during coordinate sweep", e);
    last_energy = e;
    sol.iterations = sweep;
    double res = optimality_measure(p, u);
    if (res <= tol) {
      sol.u = std::move(u);
      sol.energy = e;
      sol.optimality_residual = res;
      return sol;
    }
  }
  throw ViError("coordinate descent exceeded max_iter (residual " +
                    std::to_string(optimality_measure(p, u)) + ")",
                optimality_measure(p, u));
}

static ViSolution solve_regularized_newton(const InnerProblem& p, double tol, int max_iter,
                                           LoadVector u) {
  const auto& A = *p.stiffness;
  const Eigen::Index n = A.rows();
  Eigen::SparseMatrix<double> Ac = A;
  int newton_total = 0;
  for (double eps = 1e-2; eps >= 0.99e-10; eps /= 10.0) {
    for (int it = 0; it < 50; ++it) {
      LoadVector grad = Ac * u - p.load;
      LoadVector hdiag = LoadVector::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (p.tau[i] <= 0.0) continue;
        double s = std::sqrt(u[i] * u[i] + eps * eps);
        grad[i] += p.tau[i] * u[i] / s;
        hdiag[i] = p.tau[i] * eps * eps / (s * s * s);
      }
      ++newton_total;
      if (newton_total > max_iter)
        throw ViError("regularized Newton exceeded max_iter", grad.lpNorm<Eigen::Infinity>());
      if (grad.lpNorm<Eigen::Infinity>() <= 0.1 * eps + 0.1 * tol) break;
      Eigen::SparseMatrix<double> H = Ac;
      for (Eigen::Index i = 0; i < n; ++i)
        if (hdiag[i] > 0.0) H.coeffRef(i, i) += hdiag[i];
      Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(H);
      if (llt.info() != Eigen::Success) throw ViError("Newton Hessian factorization failed");
      u -= llt.solve(grad);
    }
  }
  // final polish: a few exact coordinate sweeps remove the smoothing bias
  ViSolution sol = solve_shrinkage_cd(p, tol, std::max(50, max_iter), std::move(u));
  sol.iterations += newton_total;
  return sol;
}

ViSolution solve_inner(const InnerProblem& p, double tol, int max_iter, InnerMethod method,
                       const LoadVector* warm_start) {
  p.validate();
  if (!(tol > 0.0)) throw ViError("tol must be positive");
  LoadVector u = warm_start ? *warm_start : LoadVector::Zero(p.stiffness->rows());
  if (u.size() != p.stiffness->rows()) throw ViError("warm start size mismatch");
  return method == InnerMethod::ShrinkageCD ? solve_shrinkage_cd(p, tol, max_iter, std::move(u))
                                            : solve_regularized_newton(p, tol, max_iter, std::move(u));
}

}  // namespace antiplane
