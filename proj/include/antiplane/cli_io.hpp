#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>

#include "antiplane/expr.hpp"
#include "antiplane/scheme.hpp"

namespace antiplane {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat `section.key = value` configuration; '#' starts a comment; unknown
/// keys are rejected with line numbers.
struct Scenario {
  std::filesystem::path source_dir;  // for resolving relative paths

  // mesh
  std::string mesh_file;     // native or Gmsh v2 ASCII
  std::string mesh_builtin;  // e.g. "square:C,N,D,N" = bottom,right,top,left
  int refine = 0;
  GmshTagMap gmsh_tags = default_gmsh_tags();

  // material
  Expr mu;  // evaluated at triangle centroids
  double mu_star = 1.0;

  FrictionSpec friction;
  AdhesionSpec adhesion;
  double beta0_const = 1.0;
  std::string beta0_file;  // optional per-contact-vertex values, one per line

  Expr f0, fN;
  std::optional<Expr> uD;  // Dirichlet lift; verification mode only

  TimeGrid grid{1.0, 1};
  double tol_outer = 1e-8;
  double tol_inner = 1e-10;
  int max_outer = 100;
  int max_inner = 50000;
  InnerMethod inner_method = InnerMethod::ShrinkageCD;

  bool verification = false;
  bool clip_beta_box = false;
  bool waive_beta0_box = false;

  std::string output_dir = "out";
};

Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& source_dir);

/// Materialized discrete problem; owns the mesh and dof map referenced by
/// the setup.
struct BuiltProblem {
  Mesh mesh;
  DofMap dofs;
  ProblemSetup setup;  // points at the mesh/dofs members above
  SchemeConfig config;

  BuiltProblem() = default;
  BuiltProblem(BuiltProblem&& o) noexcept { *this = std::move(o); }
  BuiltProblem& operator=(BuiltProblem&& o) noexcept {
    mesh = std::move(o.mesh);
    dofs = std::move(o.dofs);
    setup = std::move(o.setup);
    config = std::move(o.config);
    setup.mesh = &mesh;  // keep the self-references valid across moves
    setup.dofs = &dofs;
    return *this;
  }
  BuiltProblem(const BuiltProblem&) = delete;
  BuiltProblem& operator=(const BuiltProblem&) = delete;
};

BuiltProblem build_problem(const Scenario& scenario);

// --- result persistence ---------------------------------------------------

void write_vtk(const Mesh& mesh, const ScalarField& field, const std::string& field_name,
               std::ostream& out);
void write_field_csv(const Mesh& mesh, const ScalarField& field, std::ostream& out);
void write_beta_csv(const Mesh& mesh, const DofMap& dofs, const BetaTrajectory& beta,
                    const TimeGrid& grid, std::ostream& out);
void write_convergence_csv(const ConvergenceReport& report, std::ostream& out);

/// One refinement level of a manufactured-solution ladder: discrete errors
/// of the converged displacement against the nodal interpolant of loads.uD.
struct RateRow {
  int level = 0;
  double h = 0.0;
  double err_l2 = 0.0;
  double err_h1semi = 0.0;
};

/// Runs the scenario at refinement levels 0..max_level (verification mode
/// with loads.uD required) and reports the error ladder.
std::vector<RateRow> manufactured_rates(const Scenario& scenario, int max_level);

// --- commands -------------------------------------------------------------

/// Exit codes: 0 converged, 1 input error, 2 diverged, 3 budget exceeded.
int run_command(const std::filesystem::path& scenario_path, std::ostream& log);
int check_command(const std::filesystem::path& scenario_path, std::ostream& log);

struct SweepAxis {
  std::string key;  // material.mu_star | friction.c2g | adhesion.lambda |
                    // adhesion.beta0 | grid.T
  std::vector<double> values;
};

SweepAxis parse_axis(const std::string& spec);  // "key=v1,v2,..."

int sweep_command(const std::filesystem::path& scenario_path, const std::vector<SweepAxis>& axes,
                  std::ostream& log);

/// Output root override honoring the ANTIPLANE_OUTPUT_ROOT environment
/// variable; scenario output.dir is resolved beneath it when set.
std::filesystem::path resolve_output_dir(const Scenario& scenario);

}  // namespace antiplane
