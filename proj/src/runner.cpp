#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "antiplane/bounds.hpp"
#include "antiplane/cli_io.hpp"

namespace antiplane {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_vtk(const Mesh& mesh, const ScalarField& field, const std::string& field_name,
               std::ostream& out) {
  out << "# vtk DataFile Version 3.0\n"
      << field_name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const auto& v : mesh.vertices) out << num(v.x) << " " << num(v.y) << " 0\n";
  out << "CELLS " << mesh.triangles.size() << " " << 4 * mesh.triangles.size() << "\n";
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.triangles.size() << "\n";
  for (size_t t = 0; t < mesh.triangles.size(); ++t) out << "5\n";
  out << "POINT_DATA " << mesh.vertices.size() << "\n";
  out << "SCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : field.values) out << num(v) << "\n";
}

void write_field_csv(const Mesh& mesh, const ScalarField& field, std::ostream& out) {
  out << "vertex_id,x,y,value\n";
  for (size_t v = 0; v < mesh.vertices.size(); ++v)
    out << v << "," << num(mesh.vertices[v].x) << "," << num(mesh.vertices[v].y) << ","
        << num(field.values[v]) << "\n";
}

void write_beta_csv(const Mesh& mesh, const DofMap& dofs, const BetaTrajectory& beta,
                    const TimeGrid& grid, std::ostream& out) {
  (void)mesh;
  out << "t,vertex_id,beta\n";
  for (size_t k = 0; k < beta.size(); ++k)
    for (size_t i = 0; i < beta[k].values.size(); ++i)
      out << num(grid.node(static_cast<int>(k))) << "," << dofs.contact_vertices[i] << ","
          << num(beta[k].values[i]) << "\n";
}

void write_convergence_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "iteration,e_u,e_beta,ratio\n";
  for (size_t n = 0; n < report.history.size(); ++n) {
    const auto& it = report.history[n];
    out << (n + 1) << "," << num(it.e_u) << "," << num(it.e_beta) << ",";
    if (it.ratio_recorded) out << num(it.ratio);
    out << "\n";
  }
}

std::filesystem::path resolve_output_dir(const Scenario& scenario) {
  std::filesystem::path dir = scenario.output_dir;
  if (const char* root = std::getenv("ANTIPLANE_OUTPUT_ROOT"))
    dir = std::filesystem::path(root) / dir;
  else if (dir.is_relative())
    dir = scenario.source_dir / dir;
  return dir;
}

namespace {

double h1_seminorm(const Mesh& mesh, const std::vector<double>& values) {
  double acc = 0.0;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 p0 = mesh.vertices[tri[0]], p1 = mesh.vertices[tri[1]], p2 = mesh.vertices[tri[2]];
    const double ax = p1.x - p0.x, ay = p1.y - p0.y;
    const double bx = p2.x - p0.x, by = p2.y - p0.y;
    const double det = ax * by - ay * bx;
    const double d1 = values[tri[1]] - values[tri[0]], d2 = values[tri[2]] - values[tri[0]];
    const double gx = (by * d1 - ay * d2) / det;
    const double gy = (-bx * d1 + ax * d2) / det;
    acc += 0.5 * det * (gx * gx + gy * gy);
  }
  return std::sqrt(acc);
}

double mesh_h(const Mesh& mesh) {
  double h = 0.0;
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = mesh.vertices[tri[k]], b = mesh.vertices[tri[(k + 1) % 3]];
      h = std::max(h, std::hypot(a.x - b.x, a.y - b.y));
    }
  return h;
}

}  // namespace

std::vector<RateRow> manufactured_rates(const Scenario& scenario, int max_level) {
  if (!scenario.verification || !scenario.uD)
    throw ScenarioError("manufactured_rates needs mode.verification and loads.uD");
  std::vector<RateRow> rows;
  for (int level = 0; level <= max_level; ++level) {
    Scenario sc = scenario;
    sc.refine = level;
    BuiltProblem bp = build_problem(sc);
    CoupledSolution sol = run_coupled(bp.setup, bp.config);
    if (sol.report.termination != Termination::Converged)
      throw ScenarioError("manufactured ladder did not converge at level " +
                          std::to_string(level));
    ScalarField err = sol.u.back();
    for (size_t v = 0; v < err.values.size(); ++v)
      err.values[v] -= sc.uD->eval(bp.mesh.vertices[v].x, bp.mesh.vertices[v].y);
    RateRow row;
    row.level = level;
    row.h = mesh_h(bp.mesh);
    row.err_l2 = field_norm(bp.mesh, err, NormKind::L2_Omega);
    row.err_h1semi = h1_seminorm(bp.mesh, err.values);
    rows.push_back(row);
  }
  return rows;
}

namespace {

struct RunArtifacts {
  CoupledSolution solution;
  BoundsReport bounds;
  std::vector<std::string> files;
};

BoundsReport evaluate_bounds(const BuiltProblem& bp, const Scenario& sc,
                             const CoupledSolution& sol) {
  BoundsReport rep;
  const HypothesisConstants consts = derive_constants(sc.friction, sc.adhesion);
  DataNorms norms;
  for (size_t v = 0; v < bp.mesh.vertices.size(); ++v) {
    norms.f0_inf = std::max(norms.f0_inf,
                            std::abs(sc.f0.eval(bp.mesh.vertices[v].x, bp.mesh.vertices[v].y)));
    norms.fN_inf = std::max(norms.fN_inf,
                            std::abs(sc.fN.eval(bp.mesh.vertices[v].x, bp.mesh.vertices[v].y)));
  }
  double u_inf = 0.0, u_h1 = 0.0, beta_inf = 0.0;
  for (const auto& u : sol.u) {
    u_inf = std::max(u_inf, field_norm(bp.mesh, u, NormKind::Linf_Omega));
    u_h1 = std::max(u_h1, field_norm(bp.mesh, u, NormKind::H1_Omega));
  }
  for (const auto& b : sol.beta)
    beta_inf = std::max(beta_inf, boundary_norm(bp.mesh, bp.dofs, b, NormKind::Linf_GammaC));
  norms.beta_inf = beta_inf;
  norms.xi_inf = u_inf;  // at the fixed point the frozen field is the solution
  norms.xi_h1 = u_h1;

  const double c0 = sol.report.c0_hat;
  rep.K_value = compute_K(sc.mu_star, consts, norms, c0);
  rep.linf_ratio = rep.K_value > 0.0 ? u_inf / rep.K_value : 0.0;
  rep.apriori_H1_rhs = apriori_H1_rhs(sc.mu_star, consts, norms, c0);
  double beta0_inf = 0.0;
  for (double b : bp.setup.beta0.values) beta0_inf = std::max(beta0_inf, std::abs(b));
  auto gw = gronwall_beta_rhs(beta0_inf, consts.c0beta, consts.c3beta * c0, u_inf, sc.grid.T);
  rep.gronwall_rhs = gw.value;
  rep.gronwall_overflow = gw.overflow;
  auto box = verify_beta_box(sol.beta);
  rep.beta_box_ok = box.box_ok;
  rep.beta_monotone_ok = box.monotone_ok;
  rep.beta_worst_violation = box.worst_violation;
  return rep;
}

void write_bounds_csv(const BoundsReport& rep, std::ostream& out) {
  out << "apriori_H1_rhs,K_value,linf_ratio,gronwall_rhs,gronwall_overflow,beta_box_ok,"
         "beta_monotone_ok,beta_worst_violation\n";
  out << num(rep.apriori_H1_rhs) << "," << num(rep.K_value) << "," << num(rep.linf_ratio) << ","
      << num(rep.gronwall_rhs) << "," << (rep.gronwall_overflow ? 1 : 0) << ","
      << (rep.beta_box_ok ? 1 : 0) << "," << (rep.beta_monotone_ok ? 1 : 0) << ","
      << num(rep.beta_worst_violation) << "\n";
}

int termination_exit_code(Termination t) {
  switch (t) {
    case Termination::Converged: return 0;
    case Termination::Diverged: return 2;
    case Termination::BudgetExceeded: return 3;
  }
  return 1;
}

int run_scenario(const Scenario& sc, const std::filesystem::path& out_dir, std::ostream& log,
                 ContractionFit* fit_out = nullptr, SmallnessReport* small_out = nullptr,
                 int* iterations_out = nullptr) {
  BuiltProblem bp = build_problem(sc);
  std::filesystem::create_directories(out_dir);

  CoupledSolution sol = run_coupled(bp.setup, bp.config);
  BoundsReport bounds = evaluate_bounds(bp, sc, sol);

  auto write = [&](const std::string& name, auto&& fn) {
    std::ofstream f(out_dir / name);
    fn(f);
    return name;
  };
  std::vector<std::string> files;
  files.push_back(write("convergence.csv",
                        [&](std::ostream& f) { write_convergence_csv(sol.report, f); }));
  files.push_back(write("beta.csv", [&](std::ostream& f) {
    write_beta_csv(bp.mesh, bp.dofs, sol.beta, sc.grid, f);
  }));
  files.push_back(write("u_final.csv",
                        [&](std::ostream& f) { write_field_csv(bp.mesh, sol.u.back(), f); }));
  files.push_back(write("u_final.vtk", [&](std::ostream& f) {
    write_vtk(bp.mesh, sol.u.back(), "displacement", f);
  }));
  files.push_back(write("bounds.csv", [&](std::ostream& f) { write_bounds_csv(bounds, f); }));

  if (sc.verification && sc.uD && sc.refine >= 1) {
    std::vector<RateRow> rows = manufactured_rates(sc, sc.refine);
    files.push_back(write("rates.csv", [&](std::ostream& f) {
      f << "level,h,err_l2,err_h1semi,order_l2,order_h1semi\n";
      for (size_t r = 0; r < rows.size(); ++r) {
        f << rows[r].level << "," << num(rows[r].h) << "," << num(rows[r].err_l2) << ","
          << num(rows[r].err_h1semi);
        if (r > 0) {
          f << "," << num(std::log2(rows[r - 1].err_l2 / rows[r].err_l2)) << ","
            << num(std::log2(rows[r - 1].err_h1semi / rows[r].err_h1semi));
        } else {
          f << ",,";
        }
        f << "\n";
      }
    }));
  }

  std::optional<ContractionFit> fit;
  try {
    fit = fit_contraction(sol.report);
  } catch (const SchemeError&) {
    // too few iterations to fit; fine
  }

  {
    std::ofstream s(out_dir / "summary.txt");
    s << "status: " << termination_name(sol.report.termination) << "\n";
    s << "message: " << sol.report.message << "\n";
    s << "outer_iterations: " << sol.report.history.size() << "\n";
    s << "c0_hat: " << num(sol.report.c0_hat) << "\n";
    s << "delta_hat: " << num(sol.report.smallness.delta_hat) << " ("
      << (sol.report.smallness.pass ? "smallness passes" : "smallness FAILS") << ")\n";
    s << "T_safe: " << num(sol.report.T_safe) << (sc.grid.T > sol.report.T_safe ? "  [warning: requested T exceeds T_safe]" : "")
      << "\n";
    if (sol.report.self_consistency >= 0.0)
      s << "self_consistency_residual: " << num(sol.report.self_consistency) << "\n";
    if (fit) s << "B_fit: " << num(fit->B_fit) << "  c_fit: " << num(fit->c_fit) << "\n";
    s << "K: " << num(bounds.K_value) << "  linf_ratio: " << num(bounds.linf_ratio) << "\n";
    s << "beta_box_ok: " << bounds.beta_box_ok << "  beta_monotone_ok: " << bounds.beta_monotone_ok
      << "\n";
    s << "artifacts:";
    for (const auto& f : files) s << " " << f;
    s << " summary.txt\n";
  }

  log << termination_name(sol.report.termination) << ": " << sol.report.message << "\n";
  log << "  delta_hat = " << num(sol.report.smallness.delta_hat)
      << ", c0_hat = " << num(sol.report.c0_hat) << "\n";
  log << "  artifacts in " << out_dir.string() << "\n";

  if (fit_out && fit) *fit_out = *fit;
  if (small_out) *small_out = sol.report.smallness;
  if (iterations_out) *iterations_out = static_cast<int>(sol.report.history.size());
  return termination_exit_code(sol.report.termination);
}

}  // namespace

int run_command(const std::filesystem::path& scenario_path, std::ostream& log) {
  try {
    Scenario sc = parse_scenario(scenario_path);
    return run_scenario(sc, resolve_output_dir(sc), log);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

int check_command(const std::filesystem::path& scenario_path, std::ostream& log) {
  try {
    Scenario sc = parse_scenario(scenario_path);
    BuiltProblem bp = build_problem(sc);
    PartitionReport part = validate_partition(
        bp.mesh, sc.verification ? PartitionMode::Verification : PartitionMode::Strict);
    log << "mesh: " << bp.mesh.vertices.size() << " vertices, " << bp.mesh.triangles.size()
        << " triangles\n";
    log << "boundary lengths: D=" << num(part.dirichlet_length) << " N=" << num(part.neumann_length)
        << " C=" << num(part.contact_length) << "\n";
    for (const auto& w : part.warnings) log << "warning: " << w << "\n";
    if (!bp.dofs.contact_vertices.empty() && bp.dofs.n_free > 0) {
      double c0 = estimate_trace_constant(bp.mesh, bp.dofs).c0_hat;
      SmallnessReport small =
          check_smallness(sc.mu_star, derive_constants(sc.friction, sc.adhesion), bp.setup.beta0, c0);
      log << "c0_hat = " << num(c0) << "\n";
      log << "delta_hat = " << num(small.delta_hat) << " -> smallness "
          << (small.pass ? "passes" : "FAILS") << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

int sweep_command(const std::filesystem::path& scenario_path, const std::vector<SweepAxis>& axes,
                  std::ostream& log) {
  try {
    if (axes.empty() || axes.size() > 2) throw ScenarioError("sweep needs one or two axes");
    Scenario base = parse_scenario(scenario_path);
    std::filesystem::path root = resolve_output_dir(base);
    std::filesystem::create_directories(root);
    std::ofstream table(root / "sweep.csv");
    table << axes[0].key;
    if (axes.size() == 2) table << "," << axes[1].key;
    table << ",delta_hat,converged,B_fit,iterations\n";

    auto apply = [](Scenario& sc, const std::string& key, double v) {
      if (key == "material.mu_star") {
        sc.mu_star = v;
        // for a uniform material the coercivity floor IS the modulus
        if (sc.mu.is_constant()) sc.mu = Expr::parse(num(v));
      }
      else if (key == "friction.c2g") sc.friction.c2g = v;
      else if (key == "adhesion.lambda") sc.adhesion.lambda = {v};
      else if (key == "adhesion.beta0") sc.beta0_const = v;
      else if (key == "grid.T") sc.grid = TimeGrid(v, sc.grid.n_steps);
    };

    size_t n_outer = axes[0].values.size();
    size_t n_inner = axes.size() == 2 ? axes[1].values.size() : 1;
    int idx = 0;
    for (size_t a = 0; a < n_outer; ++a) {
      for (size_t b = 0; b < n_inner; ++b, ++idx) {
        Scenario sc = base;
        apply(sc, axes[0].key, axes[0].values[a]);
        if (axes.size() == 2) apply(sc, axes[1].key, axes[1].values[b]);
        char sub[32];
        std::snprintf(sub, sizeof sub, "sweep_%03d", idx);
        table << num(axes[0].values[a]);
        if (axes.size() == 2) table << "," << num(axes[1].values[b]);
        ContractionFit fit{std::nan(""), std::nan("")};
        SmallnessReport small;
        int iters = 0;
        int code;
        try {
          code = run_scenario(sc, root / sub, log, &fit, &small, &iters);
        } catch (const std::exception& e) {
          log << sub << " failed: " << e.what() << "\n";
          table << ",nan,error,nan,0\n";
          continue;
        }
        table << "," << num(small.delta_hat) << "," << (code == 0 ? 1 : 0) << ","
              << num(fit.B_fit) << "," << iters << "\n";
      }
    }
    log << "sweep table: " << (root / "sweep.csv").string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace antiplane
