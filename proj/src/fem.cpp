#include "antiplane/fem.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace antiplane {

namespace {

struct LocalGeom {
  double area;
  // gradients of the three barycentric basis functions
  std::array<double, 3> gx, gy;
};

LocalGeom local_geometry(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Vec2& p0 = mesh.vertices[tri[0]];
  const Vec2& p1 = mesh.vertices[tri[1]];
  const Vec2& p2 = mesh.vertices[tri[2]];
  double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  LocalGeom g;
  g.area = 0.5 * det;
  g.gx = {(p1.y - p2.y) / det, (p2.y - p0.y) / det, (p0.y - p1.y) / det};
  g.gy = {(p2.x - p1.x) / det, (p0.x - p2.x) / det, (p1.x - p0.x) / det};
  return g;
}

// mu * area * (grad_i . grad_j), exact for P1
std::array<double, 9> local_stiffness(const Mesh& mesh, int t, double mu) {
  LocalGeom g = local_geometry(mesh, t);
  std::array<double, 9> k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      k[3 * i + j] = mu * g.area * (g.gx[i] * g.gx[j] + g.gy[i] * g.gy[j]);
  return k;
}

SparseSymMatrix accumulate_stiffness(const Mesh& mesh, const DofMap& dofs,
                                     const std::vector<std::array<double, 9>>& local) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(local.size() * 9);
  for (size_t t = 0; t < local.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      int fi = dofs.free_index[tri[i]];
      if (fi < 0) continue;
      for (int j = 0; j < 3; ++j) {
        int fj = dofs.free_index[tri[j]];
        if (fj < 0) continue;
        trips.emplace_back(fi, fj, local[t][3 * i + j]);
      }
    }
  }
  SparseSymMatrix A(dofs.n_free, dofs.n_free);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

void check_mu(const Mesh& mesh, const std::vector<double>& mu) {
  if (mu.size() != mesh.triangles.size())
    throw FemError("mu must have one value per triangle");
  for (size_t t = 0; t < mu.size(); ++t)
    if (!(mu[t] > 0.0))
      throw FemError("nonpositive mu on triangle " + std::to_string(t));
}

}  // namespace

DofMap build_dof_map(const Mesh& mesh) {
  DofMap dofs;
  dofs.n_vertices = static_cast<int>(mesh.vertices.size());
  std::vector<char> constrained(dofs.n_vertices, 0);
  std::set<int> contact;
  for (size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& edge = mesh.boundary_edges[e];
    switch (edge.tag) {
      case BoundaryTag::Dirichlet:
        constrained[edge.a] = constrained[edge.b] = 1;
        break;
      case BoundaryTag::Contact:
        contact.insert(edge.a);
        contact.insert(edge.b);
        break;
      case BoundaryTag::Neumann:
        dofs.neumann_edges.push_back(static_cast<int>(e));
        break;
    }
  }
  dofs.free_index.assign(dofs.n_vertices, -1);
  for (int v = 0; v < dofs.n_vertices; ++v)
    if (!constrained[v]) dofs.free_index[v] = dofs.n_free++;
  dofs.contact_vertices.assign(contact.begin(), contact.end());
  return dofs;
}

ScalarField zero_field(const Mesh& mesh) {
  ScalarField f;
  f.values.assign(mesh.vertices.size(), 0.0);
  return f;
}

SparseSymMatrix assemble_stiffness_serial(const Mesh& mesh, const std::vector<double>& mu,
                                          const DofMap& dofs) {
  check_mu(mesh, mu);
  std::vector<std::array<double, 9>> local(mesh.triangles.size());
  for (size_t t = 0; t < mesh.triangles.size(); ++t)
    local[t] = local_stiffness(mesh, static_cast<int>(t), mu[t]);
  return accumulate_stiffness(mesh, dofs, local);
}

SparseSymMatrix assemble_stiffness(const Mesh& mesh, const std::vector<double>& mu,
                                   const DofMap& dofs) {
  check_mu(mesh, mu);
  const int nt = static_cast<int>(mesh.triangles.size());
  std::vector<std::array<double, 9>> local(nt);
#pragma omp parallel for schedule(static)
  for (int t = 0; t < nt; ++t) local[t] = local_stiffness(mesh, t, mu[t]);
  // accumulation stays serial in triangle order so results are bit-identical
  // to the reference path
  return accumulate_stiffness(mesh, dofs, local);
}

LoadVector assemble_load(const Mesh& mesh, const std::vector<double>& f0,
                         const std::vector<double>& fN, const DofMap& dofs) {
  if (f0.size() != mesh.vertices.size()) throw FemError("f0 must be a nodal vector");
  LoadVector b = LoadVector::Zero(dofs.n_free);
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    double area = mesh.triangle_area(static_cast<int>(t));
    for (int i = 0; i < 3; ++i) {
      int fi = dofs.free_index[tri[i]];
      if (fi < 0) continue;
      double s = 0.0;
      for (int j = 0; j < 3; ++j) s += (i == j ? 2.0 : 1.0) * f0[tri[j]];
      b[fi] += area / 12.0 * s;
    }
  }
  if (!fN.empty()) {
    if (fN.size() != mesh.vertices.size()) throw FemError("fN must be a nodal vector");
    for (int e : dofs.neumann_edges) {
      const auto& edge = mesh.boundary_edges[e];
      double half = 0.5 * mesh.edge_length(edge);
      for (int v : {edge.a, edge.b}) {
        int fv = dofs.free_index[v];
        if (fv >= 0) b[fv] += half * fN[v];
      }
    }
  }
  return b;
}

void apply_dirichlet_lift(const Mesh& mesh, const std::vector<double>& mu, const DofMap& dofs,
                          const std::vector<double>& dirichlet_values, LoadVector& load) {
  check_mu(mesh, mu);
  if (dirichlet_values.size() != mesh.vertices.size())
    throw FemError("dirichlet_values must be a nodal vector");
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    bool touches = false;
    for (int j = 0; j < 3; ++j)
      if (dofs.free_index[tri[j]] < 0) touches = true;
    if (!touches) continue;
    auto k = local_stiffness(mesh, static_cast<int>(t), mu[t]);
    for (int i = 0; i < 3; ++i) {
      int fi = dofs.free_index[tri[i]];
      if (fi < 0) continue;
      for (int j = 0; j < 3; ++j)
        if (dofs.free_index[tri[j]] < 0)
          load[fi] -= k[3 * i + j] * dirichlet_values[tri[j]];
    }
  }
}

std::vector<double> boundary_weights(const Mesh& mesh, const DofMap& dofs) {
  std::vector<double> w(dofs.contact_vertices.size(), 0.0);
  std::vector<int> pos(mesh.vertices.size(), -1);
  for (size_t i = 0; i < dofs.contact_vertices.size(); ++i) pos[dofs.contact_vertices[i]] = static_cast<int>(i);
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::Contact) continue;
    double half = 0.5 * mesh.edge_length(e);
    w[pos[e.a]] += half;
    w[pos[e.b]] += half;
  }
  return w;
}

double field_norm(const Mesh& mesh, const ScalarField& f, NormKind kind) {
  const auto& v = f.values;
  if (v.size() != mesh.vertices.size()) throw FemError("field size mismatch");
  switch (kind) {
    case NormKind::Linf_Omega: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    }
    case NormKind::L2_Omega: {
      double s = 0.0;
      for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        double area = mesh.triangle_area(static_cast<int>(t));
        double q = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) q += (i == j ? 2.0 : 1.0) * v[tri[i]] * v[tri[j]];
        s += area / 12.0 * q;
      }
      return std::sqrt(std::max(0.0, s));
    }
    case NormKind::H1_Omega: {
      double semi = 0.0;
      for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        auto k = local_stiffness(mesh, static_cast<int>(t), 1.0);
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) semi += k[3 * i + j] * v[tri[i]] * v[tri[j]];
      }
      return field_norm(mesh, f, NormKind::L2_Omega) + std::sqrt(std::max(0.0, semi));
    }
    default:
      throw FemError("boundary norm requested for a volume field");
  }
}

double boundary_norm(const Mesh& mesh, const DofMap& dofs, const BoundaryField& f, NormKind kind) {
  const auto& v = f.values;
  if (v.size() != dofs.contact_vertices.size()) throw FemError("boundary field size mismatch");
  switch (kind) {
    case NormKind::Linf_GammaC: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    }
    case NormKind::L2_GammaC: {
      auto w = boundary_weights(mesh, dofs);
      double s = 0.0;
      for (size_t i = 0; i < v.size(); ++i) s += w[i] * v[i] * v[i];
      return std::sqrt(std::max(0.0, s));
    }
    default:
      throw FemError("volume norm requested for a boundary field");
  }
}

BoundaryField trace_restrict(const ScalarField& field, const DofMap& dofs) {
  BoundaryField out;
  out.time_index = field.time_index;
  out.values.reserve(dofs.contact_vertices.size());
  for (int v : dofs.contact_vertices) out.values.push_back(field.values[v]);
  return out;
}

ScalarField expand_free(const LoadVector& u_free, const DofMap& dofs) {
  ScalarField f;
  f.values.assign(dofs.n_vertices, 0.0);
  for (int v = 0; v < dofs.n_vertices; ++v) {
    int fi = dofs.free_index[v];
    if (fi >= 0) f.values[v] = u_free[fi];
  }
  return f;
}

LoadVector restrict_free(const ScalarField& field, const DofMap& dofs) {
  LoadVector u(dofs.n_free);
  for (int v = 0; v < dofs.n_vertices; ++v) {
    int fi = dofs.free_index[v];
    if (fi >= 0) u[fi] = field.values[v];
  }
  return u;
}

LoadVector solve_spd(const SparseSymMatrix& A, const LoadVector& b) {
  Eigen::SparseMatrix<double> Ac = A;  // column-major for the factorization
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(Ac);
  if (llt.info() == Eigen::Success) {
    LoadVector x = llt.solve(b);
    if (llt.info() == Eigen::Success) return x;
  }
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(20 * A.rows() + 1000);
  cg.compute(Ac);
  LoadVector x = cg.solve(b);
  if (cg.info() != Eigen::Success) throw FemError("linear solve failed (matrix not SPD?)");
  return x;
}

SparseSymMatrix h1_gram(const Mesh& mesh, const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> trips;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    double area = mesh.triangle_area(static_cast<int>(t));
    auto k = local_stiffness(mesh, static_cast<int>(t), 1.0);
    for (int i = 0; i < 3; ++i) {
      int fi = dofs.free_index[tri[i]];
      if (fi < 0) continue;
      for (int j = 0; j < 3; ++j) {
        int fj = dofs.free_index[tri[j]];
        if (fj < 0) continue;
        double mass = area / 12.0 * (i == j ? 2.0 : 1.0);
        trips.emplace_back(fi, fj, mass + k[3 * i + j]);
      }
    }
  }
  SparseSymMatrix G(dofs.n_free, dofs.n_free);
  G.setFromTriplets(trips.begin(), trips.end());
  G.makeCompressed();
  return G;
}

SparseSymMatrix boundary_gram(const Mesh& mesh, const DofMap& dofs) {
  auto w = boundary_weights(mesh, dofs);
  std::vector<Eigen::Triplet<double>> trips;
  for (size_t i = 0; i < dofs.contact_vertices.size(); ++i) {
    int fi = dofs.free_index[dofs.contact_vertices[i]];
    if (fi >= 0) trips.emplace_back(fi, fi, w[i]);
  }
  SparseSymMatrix B(dofs.n_free, dofs.n_free);
  B.setFromTriplets(trips.begin(), trips.end());
  B.makeCompressed();
  return B;
}

TraceConstantResult estimate_trace_constant(const Mesh& mesh, const DofMap& dofs, int max_iter) {
  if (dofs.contact_vertices.empty()) throw FemError("trace constant needs |Gamma_C| > 0");
  if (dofs.n_free == 0) throw FemError("trace constant needs free dofs");
  SparseSymMatrix G = h1_gram(mesh, dofs);
  SparseSymMatrix B = boundary_gram(mesh, dofs);
  Eigen::SparseMatrix<double> Gc = G;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(Gc);
  if (llt.info() != Eigen::Success) throw FemError("H1 Gram factorization failed");

  LoadVector v = LoadVector::Zero(dofs.n_free);
  for (int cv : dofs.contact_vertices) {
    int fi = dofs.free_index[cv];
    if (fi >= 0) v[fi] = 1.0;
  }
  double theta = 0.0;
  TraceConstantResult res;
  for (int it = 1; it <= max_iter; ++it) {
    LoadVector Bv = B * v;
    LoadVector z = llt.solve(Bv);
    double zn = std::sqrt(z.dot(G * z));
    if (zn <= 0.0) throw FemError("trace-constant power iteration degenerated");
    z /= zn;
    double theta_new = z.dot(B * z) / z.dot(G * z);
    v = z;
    res.iterations = it;
    if (it > 1 && std::abs(theta_new - theta) <= 1e-8 * std::abs(theta_new)) {
      res.c0_hat = std::sqrt(theta_new);
      return res;
    }
    theta = theta_new;
  }
  throw FemError("trace-constant power iteration did not converge (last value " +
                 std::to_string(std::sqrt(theta)) + ")");
}

double trace_constant_dense(const Mesh& mesh, const DofMap& dofs) {
  Eigen::MatrixXd G = Eigen::MatrixXd(h1_gram(mesh, dofs));
  Eigen::MatrixXd B = Eigen::MatrixXd(boundary_gram(mesh, dofs));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(B, G);
  if (es.info() != Eigen::Success) throw FemError("dense generalized eigensolve failed");
  return std::sqrt(es.eigenvalues().maxCoeff());
}

}  // namespace antiplane
