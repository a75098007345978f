#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "antiplane/vi_solver.hpp"

namespace antiplane {
namespace oracle {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Desk-scale twin of InnerProblem: dense SPD matrix, at most 12
/// thresholded dofs.
struct DenseInstance {
  Eigen::MatrixXd A;
  Eigen::VectorXd f;
  Eigen::VectorXd tau;  // 0 at non-contact dofs
};

/// Enumerates all 3^m sign patterns (-, 0, +) over the thresholded dofs,
/// solves the induced linear system on the active set, keeps the pattern
/// whose solution is sign-consistent and whose stuck dofs satisfy
/// |residual| <= tau. Exact up to the dense solve.
Eigen::VectorXd brute_sign_pattern(const DenseInstance& inst);

/// First integral of the E3 scalar law: ln(beta) + beta is conserved up to
/// -lambda u^2 t. Bisection to 1e-12 on (0, beta0].
double scalar_e3_solution(double beta0, double lambda, double u_const, double t);

/// Central-difference check of the energy gradient away from the kink.
/// Requires |v_i| > 10h at thresholded dofs.
double fd_gradient_check(const DenseInstance& inst, const Eigen::VectorXd& point, double h);

}  // namespace oracle
}  // namespace antiplane
