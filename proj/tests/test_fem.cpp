#include <random>

#include "antiplane/fem.hpp"
#include "doctest.h"

using namespace antiplane;

namespace {

Mesh square() {
  return unit_square_mesh(BoundaryTag::Contact, BoundaryTag::Neumann, BoundaryTag::Dirichlet,
                          BoundaryTag::Neumann);
}

Mesh all_free_square() {
  // no Dirichlet boundary: every dof free (verification-style meshes)
  return unit_square_mesh(BoundaryTag::Contact, BoundaryTag::Neumann, BoundaryTag::Neumann,
                          BoundaryTag::Neumann);
}

}  // namespace

TEST_CASE("dof map: constrained, free, contact lists") {
  Mesh mesh = square();
  DofMap dofs = build_dof_map(mesh);
  CHECK(dofs.n_vertices == 4);
  CHECK(dofs.n_free == 2);  // top edge (2 vertices) is Dirichlet
  CHECK(dofs.constrained(2));
  CHECK(dofs.constrained(3));
  CHECK(dofs.contact_vertices == std::vector<int>{0, 1});

  Mesh fine = refine_uniform(mesh);
  DofMap fdofs = build_dof_map(fine);
  CHECK(fdofs.contact_vertices.size() == 3);  // C-tagged bottom edge, 3 vertices

  Mesh all_d = unit_square_mesh(BoundaryTag::Dirichlet, BoundaryTag::Dirichlet,
                                BoundaryTag::Dirichlet, BoundaryTag::Dirichlet);
  Mesh all_d_fine = refine_uniform(all_d);
  DofMap ddofs = build_dof_map(all_d_fine);
  CHECK(ddofs.n_free == 1);  // only the center vertex is interior
}

TEST_CASE("local stiffness of the unit right triangle") {
  Mesh mesh;
  mesh.vertices = {{0, 0}, {1, 0}, {0, 1}};
  mesh.triangles = {{0, 1, 2}};
  mesh.boundary_edges = {{0, 1, BoundaryTag::Neumann},
                         {1, 2, BoundaryTag::Neumann},
                         {2, 0, BoundaryTag::Neumann}};
  DofMap dofs = build_dof_map(mesh);
  REQUIRE(dofs.n_free == 3);
  const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  for (double scale : {1.0, 10.0}) {
    SparseSymMatrix A = assemble_stiffness(mesh, {scale}, dofs);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(A.coeff(i, j) == doctest::Approx(scale * expected[i][j]).epsilon(1e-14));
  }
}

TEST_CASE("all-free stiffness has constants in its kernel") {
  Mesh mesh = refine_uniform(all_free_square());
  DofMap dofs = build_dof_map(mesh);
  std::vector<double> mu(mesh.triangles.size(), 1.0);
  SparseSymMatrix A = assemble_stiffness(mesh, mu, dofs);
  LoadVector ones = LoadVector::Ones(dofs.n_free);
  CHECK((A * ones).lpNorm<Eigen::Infinity>() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("parallel and serial assembly agree bit for bit") {
  Mesh mesh = square();
  for (int r = 0; r < 4; ++r) mesh = refine_uniform(mesh);
  DofMap dofs = build_dof_map(mesh);
  std::vector<double> mu;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) mu.push_back(1.0 + 0.01 * (t % 7));
  SparseSymMatrix a = assemble_stiffness(mesh, mu, dofs);
  SparseSymMatrix b = assemble_stiffness_serial(mesh, mu, dofs);
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("load assembly: partition of unity") {
  Mesh mesh = refine_uniform(square());
  DofMap dofs = build_dof_map(mesh);
  SUBCASE("volume term sums to the area over all vertices") {
    Mesh free_mesh = refine_uniform(all_free_square());
    DofMap fdofs = build_dof_map(free_mesh);
    std::vector<double> f0(free_mesh.vertices.size(), 1.0), fN(free_mesh.vertices.size(), 0.0);
    LoadVector load = assemble_load(free_mesh, f0, fN, fdofs);
    CHECK(load.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("edge term sums to the Neumann length") {
    Mesh one_n = unit_square_mesh(BoundaryTag::Contact, BoundaryTag::Contact, BoundaryTag::Contact,
                                  BoundaryTag::Neumann);
    Mesh fine = refine_uniform(one_n);
    DofMap ndofs = build_dof_map(fine);
    std::vector<double> f0(fine.vertices.size(), 0.0), fN(fine.vertices.size(), 1.0);
    LoadVector load = assemble_load(fine, f0, fN, ndofs);
    CHECK(load.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
  (void)dofs;
}

TEST_CASE("boundary weights: trapezoid lumping") {
  Mesh mesh = square();
  DofMap dofs = build_dof_map(mesh);
  std::vector<double> w = boundary_weights(mesh, dofs);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));

  Mesh fine = refine_uniform(mesh);
  DofMap fdofs = build_dof_map(fine);
  std::vector<double> wf = boundary_weights(fine, fdofs);
  REQUIRE(wf.size() == 3);
  double total = 0.0;
  for (double x : wf) total += x;
  CHECK(total == doctest::Approx(validate_partition(fine, PartitionMode::Strict).contact_length)
                     .epsilon(1e-14));
  std::vector<double> sorted = wf;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted[0] == doctest::Approx(0.25));
  CHECK(sorted[1] == doctest::Approx(0.25));
  CHECK(sorted[2] == doctest::Approx(0.5));
}

TEST_CASE("field norms") {
  Mesh mesh = refine_uniform(square());
  ScalarField two{std::vector<double>(mesh.vertices.size(), 2.0)};
  CHECK(field_norm(mesh, two, NormKind::L2_Omega) == doctest::Approx(2.0).epsilon(1e-14));
  ScalarField zero = zero_field(mesh);
  CHECK(field_norm(mesh, zero, NormKind::H1_Omega) == 0.0);
  CHECK(field_norm(mesh, zero, NormKind::Linf_Omega) == 0.0);
  ScalarField linear{std::vector<double>(mesh.vertices.size())};
  for (size_t v = 0; v < mesh.vertices.size(); ++v) linear.values[v] = mesh.vertices[v].x;
  // sum-convention H1 norm of u = x: ||x||_L2 + ||grad||_L2 = 1/sqrt(3) + 1
  CHECK(field_norm(mesh, linear, NormKind::H1_Omega) ==
        doctest::Approx(1.0 / std::sqrt(3.0) + 1.0).epsilon(1e-14));
  CHECK(field_norm(mesh, linear, NormKind::Linf_Omega) == doctest::Approx(1.0));
}

TEST_CASE("trace restriction") {
  Mesh mesh = refine_uniform(square());
  DofMap dofs = build_dof_map(mesh);
  ScalarField f{std::vector<double>(mesh.vertices.size(), 1.0)};
  BoundaryField tr = trace_restrict(f, dofs);
  REQUIRE(tr.values.size() == dofs.contact_vertices.size());
  for (double v : tr.values) CHECK(v == 1.0);
  for (size_t i = 0; i < dofs.contact_vertices.size(); ++i) {
    f.values[dofs.contact_vertices[i]] = 10.0 + static_cast<double>(i);
  }
  BoundaryField tr2 = trace_restrict(f, dofs);
  for (size_t i = 0; i < tr2.values.size(); ++i) CHECK(tr2.values[i] == 10.0 + i);
  BoundaryField trz = trace_restrict(zero_field(mesh), dofs);
  for (double v : trz.values) CHECK(v == 0.0);
}

TEST_CASE("trace constant: inequality holds on random fields") {
  Mesh mesh = square();
  for (int r = 0; r < 3; ++r) mesh = refine_uniform(mesh);
  DofMap dofs = build_dof_map(mesh);
  TraceConstantResult res = estimate_trace_constant(mesh, dofs);
  CHECK(res.c0_hat > 0.0);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < 100; ++s) {
    ScalarField f = zero_field(mesh);
    for (size_t v = 0; v < f.values.size(); ++v)
      if (!dofs.constrained(static_cast<int>(v))) f.values[v] = gauss(rng);
    double lhs = boundary_norm(mesh, dofs, trace_restrict(f, dofs), NormKind::L2_GammaC);
    double rhs = res.c0_hat * field_norm(mesh, f, NormKind::H1_Omega);
    CHECK(lhs <= rhs * (1.0 + 1e-10));
  }
}

TEST_CASE("trace constant: power iteration matches the dense eigensolve") {
  for (int refine : {0, 1, 2}) {
    Mesh mesh = square();
    for (int r = 0; r < refine; ++r) mesh = refine_uniform(mesh);
    DofMap dofs = build_dof_map(mesh);
    double iterative = estimate_trace_constant(mesh, dofs).c0_hat;
    double dense = trace_constant_dense(mesh, dofs);
    CHECK(iterative == doctest::Approx(dense).epsilon(1e-6));
  }
}

TEST_CASE("trace constant does not grow when the contact boundary shrinks") {
  // same mesh; C on the whole bottom vs C on half the bottom (rest N)
  Mesh full = refine_uniform(refine_uniform(square()));
  Mesh half = full;
  bool shrunk = false;
  for (auto& e : half.boundary_edges)
    if (e.tag == BoundaryTag::Contact && !shrunk &&
        half.vertices[e.a].x < 0.5 - 1e-12) {
      e.tag = BoundaryTag::Neumann;
      shrunk = true;
    }
  REQUIRE(shrunk);
  double c_full = estimate_trace_constant(full, build_dof_map(full)).c0_hat;
  double c_half = estimate_trace_constant(half, build_dof_map(half)).c0_hat;
  CHECK(c_half <= c_full * (1.0 + 1e-10));
}

TEST_CASE("solve_spd solves the discrete Poisson problem") {
  Mesh mesh = square();
  for (int r = 0; r < 3; ++r) mesh = refine_uniform(mesh);
  DofMap dofs = build_dof_map(mesh);
  std::vector<double> mu(mesh.triangles.size(), 1.0);
  SparseSymMatrix A = assemble_stiffness(mesh, mu, dofs);
  LoadVector b = LoadVector::Random(dofs.n_free);
  LoadVector x = solve_spd(A, b);
  CHECK((A * x - b).lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + b.lpNorm<Eigen::Infinity>()));
}
