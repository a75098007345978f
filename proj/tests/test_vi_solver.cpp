#include <random>

#include "antiplane/oracle.hpp"
#include "antiplane/vi_solver.hpp"
#include "doctest.h"

using namespace antiplane;

namespace {

SparseSymMatrix to_sparse(const Eigen::MatrixXd& A) {
  SparseSymMatrix S(A.rows(), A.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      if (A(i, j) != 0.0) S.insert(i, j) = A(i, j);
  S.makeCompressed();
  return S;
}

oracle::DenseInstance random_instance(std::mt19937_64& rng, int n, int n_thresh) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = gauss(rng);
  oracle::DenseInstance inst;
  inst.A = B.transpose() * B + Eigen::MatrixXd::Identity(n, n) * 0.5;
  inst.f.resize(n);
  for (int i = 0; i < n; ++i) inst.f(i) = 3.0 * gauss(rng);
  inst.tau = Eigen::VectorXd::Zero(n);
  std::uniform_real_distribution<double> utau(0.0, 2.0);
  for (int i = 0; i < n_thresh; ++i) inst.tau(i) = utau(rng);
  return inst;
}

}  // namespace

TEST_CASE("single dof: closed-form soft threshold") {
  Eigen::MatrixXd A(1, 1);
  A << 2.0;
  SparseSymMatrix S = to_sparse(A);
  InnerProblem p;
  p.stiffness = &S;
  p.load = LoadVector::Constant(1, 3.0);
  p.tau = LoadVector::Constant(1, 1.0);
  for (auto method : {InnerMethod::ShrinkageCD, InnerMethod::RegularizedNewton}) {
    ViSolution sol = solve_inner(p, 1e-12, 1000, method);
    CHECK(sol.u(0) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(optimality_measure(p, LoadVector::Constant(1, 1.0)) == doctest::Approx(0.0));
  CHECK(energy(p, LoadVector::Constant(1, 1.0)) == doctest::Approx(-1.0));  // 1/2*2 - 3 + 1

  p.tau(0) = 5.0;  // threshold exceeds the force: stick
  ViSolution stick = solve_inner(p, 1e-12, 1000);
  CHECK(stick.u(0) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(optimality_measure(p, LoadVector::Zero(1)) == doctest::Approx(0.0));
}

TEST_CASE("diagonal two-dof instance is separable") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2) * 2.0;
  SparseSymMatrix S = to_sparse(A);
  InnerProblem p;
  p.stiffness = &S;
  p.load.resize(2);
  p.load << 3.0, 0.0;
  p.tau = LoadVector::Constant(2, 1.0);
  ViSolution sol = solve_inner(p, 1e-12, 1000);
  CHECK(sol.u(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.u(1) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("tau = 0 reduces to the linear solve") {
  std::mt19937_64 rng(3);
  oracle::DenseInstance inst = random_instance(rng, 6, 0);
  SparseSymMatrix S = to_sparse(inst.A);
  InnerProblem p{&S, inst.f, Eigen::VectorXd::Zero(6)};
  ViSolution sol = solve_inner(p, 1e-12, 100000);
  Eigen::VectorXd exact = inst.A.ldlt().solve(inst.f);
  CHECK((sol.u - exact).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("solver matches the sign-pattern oracle on random instances") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + static_cast<int>(rng() % 5);
    int m = std::min<int>(n, 1 + static_cast<int>(rng() % 5));
    oracle::DenseInstance inst = random_instance(rng, n, m);
    Eigen::VectorXd ref = oracle::brute_sign_pattern(inst);
    SparseSymMatrix S = to_sparse(inst.A);
    InnerProblem p{&S, inst.f, inst.tau};
    CHECK(optimality_measure(p, ref) <= 1e-10);
    for (auto method : {InnerMethod::ShrinkageCD, InnerMethod::RegularizedNewton}) {
      ViSolution sol = solve_inner(p, 1e-12, 200000, method);
      CHECK((sol.u - ref).lpNorm<Eigen::Infinity>() <= 1e-8);
    }
  }
}

TEST_CASE("optimality measure is positive off the solution") {
  std::mt19937_64 rng(5);
  oracle::DenseInstance inst = random_instance(rng, 5, 3);
  Eigen::VectorXd ref = oracle::brute_sign_pattern(inst);
  SparseSymMatrix S = to_sparse(inst.A);
  InnerProblem p{&S, inst.f, inst.tau};
  Eigen::VectorXd perturbed = ref;
  perturbed(2) += 0.01;
  CHECK(optimality_measure(p, perturbed) > 1e-6);
  CHECK(energy(p, LoadVector::Zero(5)) == 0.0);
  ViSolution sol = solve_inner(p, 1e-12, 100000);
  CHECK(sol.energy <= 0.0);  // descent from the zero start
}

TEST_CASE("warm start reproduces the cold-start solution") {
  std::mt19937_64 rng(9);
  oracle::DenseInstance inst = random_instance(rng, 6, 4);
  SparseSymMatrix S = to_sparse(inst.A);
  InnerProblem p{&S, inst.f, inst.tau};
  ViSolution cold = solve_inner(p, 1e-12, 100000);
  ViSolution warm = solve_inner(p, 1e-12, 100000, InnerMethod::ShrinkageCD, &cold.u);
  CHECK((warm.u - cold.u).lpNorm<Eigen::Infinity>() <= 1e-10);
  CHECK(warm.iterations <= cold.iterations);
}

TEST_CASE("adhesion folding into the load") {
  DofMap dofs;
  dofs.n_vertices = 3;
  dofs.n_free = 3;
  dofs.free_index = {0, 1, 2};
  dofs.contact_vertices = {1};
  LoadVector load = LoadVector::Zero(3);
  SUBCASE("single-vertex arithmetic") {
    LoadVector out = fold_adhesion(load, dofs, {0.5}, {2.0}, BoundaryField{{1.0}},
                                   BoundaryField{{3.0}});
    CHECK(out(0) == 0.0);
    CHECK(out(1) == doctest::Approx(3.0));  // w*lambda*beta^2*u = 0.5*2*1*3
    CHECK(out(2) == 0.0);
  }
  SUBCASE("beta = 0 leaves the load unchanged") {
    LoadVector out = fold_adhesion(load, dofs, {0.5}, {2.0}, BoundaryField{{0.0}},
                                   BoundaryField{{3.0}});
    CHECK(out.lpNorm<Eigen::Infinity>() == 0.0);
  }
  SUBCASE("lambda = 0 leaves the load unchanged") {
    LoadVector out = fold_adhesion(load, dofs, {0.5}, {0.0}, BoundaryField{{1.0}},
                                   BoundaryField{{3.0}});
    CHECK(out.lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("scatter_contact places thresholds at free contact dofs") {
  DofMap dofs;
  dofs.n_vertices = 4;
  dofs.n_free = 3;
  dofs.free_index = {0, 1, -1, 2};
  dofs.contact_vertices = {0, 3};
  LoadVector tau = scatter_contact(dofs, {1.5, 2.5});
  REQUIRE(tau.size() == 3);
  CHECK(tau(0) == 1.5);
  CHECK(tau(1) == 0.0);
  CHECK(tau(2) == 2.5);
}

TEST_CASE("finite-difference gradient oracle") {
  std::mt19937_64 rng(21);
  SUBCASE("quadratic-only instance is exact up to round-off") {
    oracle::DenseInstance inst = random_instance(rng, 5, 0);
    Eigen::VectorXd pt = Eigen::VectorXd::Constant(5, 0.7);
    CHECK(oracle::fd_gradient_check(inst, pt, 1e-5) <= 1e-8);
  }
  SUBCASE("thresholded instance at a sliding point: halving h quarters the error") {
    oracle::DenseInstance inst = random_instance(rng, 5, 3);
    Eigen::VectorXd pt = Eigen::VectorXd::Constant(5, 0.9);
    double e1 = oracle::fd_gradient_check(inst, pt, 1e-3);
    double e2 = oracle::fd_gradient_check(inst, pt, 5e-4);
    CHECK(e2 <= e1);  // second-order scheme on a smooth region
  }
  SUBCASE("point on the kink is rejected") {
    oracle::DenseInstance inst = random_instance(rng, 4, 2);
    Eigen::VectorXd pt = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(oracle::fd_gradient_check(inst, pt, 1e-5), oracle::OracleError);
  }
}

TEST_CASE("scalar E3 oracle") {
  CHECK(oracle::scalar_e3_solution(0.8, 1.0, 1.0, 0.0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(oracle::scalar_e3_solution(0.8, 0.0, 1.0, 5.0) == doctest::Approx(0.8).epsilon(1e-12));
  // root of ln(beta) + beta = 0
  CHECK(oracle::scalar_e3_solution(1.0, 1.0, 1.0, 1.0) ==
        doctest::Approx(0.567143290).epsilon(1e-9));
}
