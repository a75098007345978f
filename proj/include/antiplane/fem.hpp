#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <vector>

#include "antiplane/mesh.hpp"

namespace antiplane {

struct FemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Free-dof numbering: vertices on Dirichlet edges are constrained.
struct DofMap {
  int n_vertices = 0;
  int n_free = 0;
  std::vector<int> free_index;        // per vertex, -1 if constrained
  std::vector<int> contact_vertices;  // sorted, duplicate-free
  std::vector<int> neumann_edges;     // indices into mesh.boundary_edges

  bool constrained(int v) const { return free_index[v] < 0; }
};

DofMap build_dof_map(const Mesh& mesh);

/// Nodal values over all mesh vertices; constrained entries are zero unless
/// a Dirichlet lift is explicitly in play (verification runs).
struct ScalarField {
  std::vector<double> values;
  int time_index = 0;
};

/// Nodal values at the contact vertices, in contact-list order.
struct BoundaryField {
  std::vector<double> values;
  int time_index = 0;
};

ScalarField zero_field(const Mesh& mesh);

using SparseSymMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using LoadVector = Eigen::VectorXd;

/// Stiffness over free dofs, exact P1 integration, Dirichlet rows/cols
/// eliminated. mu is piecewise constant per triangle and must exceed
/// mu_star > 0 on every triangle.
SparseSymMatrix assemble_stiffness(const Mesh& mesh, const std::vector<double>& mu,
                                   const DofMap& dofs);

/// Serial reference path for the OpenMP assembly kernel; identical output.
SparseSymMatrix assemble_stiffness_serial(const Mesh& mesh, const std::vector<double>& mu,
                                          const DofMap& dofs);

/// Volume term by exact P1 mass quadrature of the nodal interpolant of f0;
/// Neumann term by the edge trapezoid rule on fN (nodal values).
LoadVector assemble_load(const Mesh& mesh, const std::vector<double>& f0,
                         const std::vector<double>& fN, const DofMap& dofs);

/// Moves known Dirichlet values to the right-hand side: load -= A_fc * uD.
/// Used by manufactured-solution verification runs only.
void apply_dirichlet_lift(const Mesh& mesh, const std::vector<double>& mu, const DofMap& dofs,
                          const std::vector<double>& dirichlet_values, LoadVector& load);

/// Trapezoid lumping on Gamma_C: w_i = half the length of incident C-edges,
/// in contact-list order. Sum of weights equals |Gamma_C|.
std::vector<double> boundary_weights(const Mesh& mesh, const DofMap& dofs);

enum class NormKind { L2_Omega, H1_Omega, Linf_Omega, L2_GammaC, Linf_GammaC };

/// H1 is the sum convention ||v||_L2 + ||grad v||_L2. Boundary L2 uses the
/// trapezoid rule on contact edges.
double field_norm(const Mesh& mesh, const ScalarField& f, NormKind kind);
double boundary_norm(const Mesh& mesh, const DofMap& dofs, const BoundaryField& f, NormKind kind);

BoundaryField trace_restrict(const ScalarField& field, const DofMap& dofs);

/// Scatter free-dof vector into a full nodal field (constrained entries 0).
ScalarField expand_free(const LoadVector& u_free, const DofMap& dofs);
LoadVector restrict_free(const ScalarField& field, const DofMap& dofs);

/// Direct sparse Cholesky solve with a conjugate-gradient fallback at
/// relative residual 1e-12.
LoadVector solve_spd(const SparseSymMatrix& A, const LoadVector& b);

struct TraceConstantResult {
  double c0_hat = 0.0;  // sqrt of the top generalized eigenvalue
  int iterations = 0;
};

/// Sharpest discrete constant with ||v||_{L2(Gamma_C)} <= c0_hat ||v||_{H1}
/// over the free subspace: top eigenvalue of the pencil (boundary Gram,
/// H1 Gram) by power iteration (relative tolerance 1e-8).
/// The eigenproblem uses the squared-sum H1 Gram M + Kappa; since
/// sqrt(a^2+b^2) <= a+b, the constant also certifies the sum-convention norm.
TraceConstantResult estimate_trace_constant(const Mesh& mesh, const DofMap& dofs,
                                            int max_iter = 10000);

/// Dense full eigensolve of the same pencil; coarse-mesh oracle for tests.
double trace_constant_dense(const Mesh& mesh, const DofMap& dofs);

/// H1 Gram (squared-sum: mass + unit-coefficient stiffness) and the lumped
/// boundary Gram over free dofs; building blocks for the trace pencil.
SparseSymMatrix h1_gram(const Mesh& mesh, const DofMap& dofs);
SparseSymMatrix boundary_gram(const Mesh& mesh, const DofMap& dofs);

}  // namespace antiplane
