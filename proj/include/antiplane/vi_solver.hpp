#pragma once

#include "antiplane/fem.hpp"

namespace antiplane {

struct ViError : std::runtime_error {
  ViError(const std::string& what, double residual = -1.0)
      : std::runtime_error(what), best_residual(residual) {}
  double best_residual;
};

/// Frozen-coefficient inner problem: minimize over free dofs
///   J(v) = 1/2 v'Av - f'v + sum_i tau_i |v_i|
/// where tau is nonzero only at free contact dofs. The adhesion contribution
/// of the previous iterate is already folded into the load.
struct InnerProblem {
  const SparseSymMatrix* stiffness = nullptr;
  LoadVector load;
  LoadVector tau;  // per free dof, >= 0, nonzero only at contact dofs

  void validate() const;
};

/// Builds the per-free-dof threshold vector from per-contact-vertex values.
LoadVector scatter_contact(const DofMap& dofs, const std::vector<double>& per_contact_vertex);

/// load'_i = load_i + w_i lambda_i beta_i^2 uprev_i at contact dofs.
LoadVector fold_adhesion(const LoadVector& load, const DofMap& dofs,
                         const std::vector<double>& weights, const std::vector<double>& lambda,
                         const BoundaryField& beta_prev, const BoundaryField& uprev_trace);

enum class InnerMethod { ShrinkageCD, RegularizedNewton };

struct ViSolution {
  LoadVector u;  // free dofs
  double energy = 0.0;
  double optimality_residual = 0.0;
  int iterations = 0;
};

/// Subdifferential residual in the max norm; zero iff u solves the discrete
/// problem exactly. At a thresholded dof: |r_i + tau_i sign(u_i)| when
/// u_i != 0, else max(0, |r_i| - tau_i), with r = Au - f.
double optimality_measure(const InnerProblem& problem, const LoadVector& u);

double energy(const InnerProblem& problem, const LoadVector& u);

/// ShrinkageCD: cyclic exact coordinate minimization; soft-threshold update
/// at thresholded dofs, Gauss-Seidel elsewhere. Deterministic fixed sweep
/// order. RegularizedNewton: smooths |v| to sqrt(v^2+eps^2) with eps
/// continuation 1e-2 -> 1e-10 (factors of 10) and a final shrinkage polish.
/// Both certify through optimality_measure.
ViSolution solve_inner(const InnerProblem& problem, double tol, int max_iter,
                       InnerMethod method = InnerMethod::ShrinkageCD,
                       const LoadVector* warm_start = nullptr);

}  // namespace antiplane
