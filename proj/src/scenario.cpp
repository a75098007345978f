#include <algorithm>
#include <fstream>
#include <sstream>

#include "antiplane/cli_io.hpp"

namespace antiplane {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ScenarioError("line " + std::to_string(line) + ": expected boolean, got '" + v + "'");
}

double parse_double(const std::string& v, int line) {
  try {
    size_t end;
    double d = std::stod(v, &end);
    if (end != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ScenarioError("line " + std::to_string(line) + ": expected number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, int line) {
  try {
    size_t end;
    int i = std::stoi(v, &end);
    if (end != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ScenarioError("line " + std::to_string(line) + ": expected integer, got '" + v + "'");
  }
}

Expr parse_expr(const std::string& v, int line) {
  try {
    return Expr::parse(v);
  } catch (const ExprError& e) {
    throw ScenarioError("line " + std::to_string(line) + ": " + e.what());
  }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& source_dir) {
  Scenario sc;
  sc.source_dir = source_dir;
  sc.mu = Expr::parse("1");
  sc.f0 = Expr::parse("0");
  sc.fN = Expr::parse("0");

  double grid_T = 1.0;
  int grid_steps = 1;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ScenarioError("line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.empty())
      throw ScenarioError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");

    if (key == "mesh.file") sc.mesh_file = val;
    else if (key == "mesh.builtin") sc.mesh_builtin = val;
    else if (key == "mesh.refine") sc.refine = parse_int(val, line_no);
    else if (key.rfind("mesh.gmsh_physical.", 0) == 0) {
      int phys = parse_int(key.substr(std::string("mesh.gmsh_physical.").size()), line_no);
      if (val == "D") sc.gmsh_tags[phys] = BoundaryTag::Dirichlet;
      else if (val == "N") sc.gmsh_tags[phys] = BoundaryTag::Neumann;
      else if (val == "C") sc.gmsh_tags[phys] = BoundaryTag::Contact;
      else throw ScenarioError("line " + std::to_string(line_no) + ": unknown boundary tag '" + val + "'");
    }
    else if (key == "material.mu") sc.mu = parse_expr(val, line_no);
    else if (key == "material.mu_star") sc.mu_star = parse_double(val, line_no);
    else if (key == "friction.c0g") sc.friction.c0g = parse_double(val, line_no);
    else if (key == "friction.c1g") sc.friction.c1g = parse_double(val, line_no);
    else if (key == "friction.c2g") sc.friction.c2g = parse_double(val, line_no);
    else if (key == "adhesion.law") {
      try {
        sc.adhesion.law = parse_adhesion_law(val);
      } catch (const LawError& e) {
        throw ScenarioError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    else if (key == "adhesion.lambda") sc.adhesion.lambda = {parse_double(val, line_no)};
    else if (key == "adhesion.ED") sc.adhesion.ED = {parse_double(val, line_no)};
    else if (key == "adhesion.beta0") {
      if (val.rfind("file:", 0) == 0) sc.beta0_file = val.substr(5);
      else sc.beta0_const = parse_double(val, line_no);
    }
    else if (key == "loads.f0") sc.f0 = parse_expr(val, line_no);
    else if (key == "loads.fN") sc.fN = parse_expr(val, line_no);
    else if (key == "loads.uD") sc.uD = parse_expr(val, line_no);
    else if (key == "grid.T") grid_T = parse_double(val, line_no);
    else if (key == "grid.n_steps") grid_steps = parse_int(val, line_no);
    else if (key == "tol.outer") sc.tol_outer = parse_double(val, line_no);
    else if (key == "tol.inner") sc.tol_inner = parse_double(val, line_no);
    else if (key == "limits.max_outer") sc.max_outer = parse_int(val, line_no);
    else if (key == "limits.max_inner") sc.max_inner = parse_int(val, line_no);
    else if (key == "solver.inner") {
      if (val == "shrinkage_cd") sc.inner_method = InnerMethod::ShrinkageCD;
      else if (val == "regularized_newton") sc.inner_method = InnerMethod::RegularizedNewton;
      else throw ScenarioError("line " + std::to_string(line_no) + ": unknown inner solver '" + val + "'");
    }
    else if (key == "mode.verification") sc.verification = parse_bool(val, line_no);
    else if (key == "mode.clip_beta_box") sc.clip_beta_box = parse_bool(val, line_no);
    else if (key == "mode.waive_beta0_box") sc.waive_beta0_box = parse_bool(val, line_no);
    else if (key == "output.dir") sc.output_dir = val;
    else throw ScenarioError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }

  try {
    sc.grid = TimeGrid(grid_T, grid_steps);
  } catch (const BondingError& e) {
    throw ScenarioError(e.what());
  }

  if (sc.mesh_file.empty() == sc.mesh_builtin.empty())
    throw ScenarioError("exactly one of mesh.file and mesh.builtin is required");
  if (sc.uD && !sc.verification)
    throw ScenarioError("loads.uD (Dirichlet lift) requires mode.verification = true");
  if (sc.friction.c0g < 0 || sc.friction.c1g < 0 || sc.friction.c2g < 0)
    throw ScenarioError("friction constants must be nonnegative");
  if (sc.adhesion.lambda_inf() != sc.adhesion.lambda[0] || sc.adhesion.lambda[0] < 0)
    throw ScenarioError("adhesion.lambda must be nonnegative");
  if (!(sc.mu_star > 0)) throw ScenarioError("material.mu_star must be positive");
  if (sc.beta0_file.empty() && !sc.waive_beta0_box && !sc.verification) {
    if (!(sc.beta0_const > 0.0 && sc.beta0_const <= 1.0))
      throw ScenarioError(
          "adhesion.beta0 = " + std::to_string(sc.beta0_const) +
          " is outside (0, 1]; the bonding box and monotonicity guarantees require an initial "
          "bonding field in that range (set mode.waive_beta0_box = true to run anyway)");
  }
  return sc;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario_text(ss.str(), path.has_parent_path() ? path.parent_path() : ".");
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

namespace {

BoundaryTag tag_of_char(char c) {
  switch (c) {
    case 'D': return BoundaryTag::Dirichlet;
    case 'N': return BoundaryTag::Neumann;
    case 'C': return BoundaryTag::Contact;
  }
  throw ScenarioError(std::string("unknown boundary tag '") + c + "' in mesh.builtin");
}

Mesh builtin_mesh(const std::string& spec) {
  // "square:C,N,D,N" = tags for bottom, right, top, left
  if (spec.rfind("square:", 0) != 0)
    throw ScenarioError("unknown mesh.builtin '" + spec + "' (expected square:B,R,T,L)");
  std::string tags = spec.substr(7);
  if (tags.size() != 7 || tags[1] != ',' || tags[3] != ',' || tags[5] != ',')
    throw ScenarioError("mesh.builtin square needs four comma-separated tags");
  return unit_square_mesh(tag_of_char(tags[0]), tag_of_char(tags[2]), tag_of_char(tags[4]),
                          tag_of_char(tags[6]));
}

}  // namespace

BuiltProblem build_problem(const Scenario& sc) {
  BuiltProblem bp;
  if (!sc.mesh_file.empty()) {
    std::filesystem::path p = sc.mesh_file;
    if (p.is_relative()) p = sc.source_dir / p;
    bp.mesh = load_mesh_file(p.string(), sc.gmsh_tags);
  } else {
    bp.mesh = builtin_mesh(sc.mesh_builtin);
  }
  for (int r = 0; r < sc.refine; ++r) bp.mesh = refine_uniform(bp.mesh);
  validate_partition(bp.mesh, sc.verification ? PartitionMode::Verification : PartitionMode::Strict);
  bp.dofs = build_dof_map(bp.mesh);

  bp.setup.mesh = &bp.mesh;
  bp.setup.dofs = &bp.dofs;
  bp.setup.mu_star = sc.mu_star;
  bp.setup.fric = sc.friction;
  bp.setup.adh = sc.adhesion;

  bp.setup.mu.reserve(bp.mesh.triangles.size());
  for (const auto& tri : bp.mesh.triangles) {
    double cx = 0, cy = 0;
    for (int v : tri) {
      cx += bp.mesh.vertices[v].x / 3.0;
      cy += bp.mesh.vertices[v].y / 3.0;
    }
    bp.setup.mu.push_back(sc.mu.eval(cx, cy));
  }

  std::vector<double> f0(bp.mesh.vertices.size()), fN(bp.mesh.vertices.size());
  for (size_t v = 0; v < bp.mesh.vertices.size(); ++v) {
    f0[v] = sc.f0.eval(bp.mesh.vertices[v].x, bp.mesh.vertices[v].y);
    fN[v] = sc.fN.eval(bp.mesh.vertices[v].x, bp.mesh.vertices[v].y);
  }
  bp.setup.loads = {assemble_load(bp.mesh, f0, fN, bp.dofs)};  // constant in time

  if (sc.uD) {
    bp.setup.dirichlet.resize(bp.mesh.vertices.size(), 0.0);
    for (size_t v = 0; v < bp.mesh.vertices.size(); ++v)
      bp.setup.dirichlet[v] = sc.uD->eval(bp.mesh.vertices[v].x, bp.mesh.vertices[v].y);
  }

  bp.setup.beta0.values.assign(bp.dofs.contact_vertices.size(), sc.beta0_const);
  if (!sc.beta0_file.empty()) {
    std::filesystem::path p = sc.beta0_file;
    if (p.is_relative()) p = sc.source_dir / p;
    std::ifstream in(p);
    if (!in) throw ScenarioError("cannot open beta0 file '" + p.string() + "'");
    for (auto& b : bp.setup.beta0.values)
      if (!(in >> b)) throw ScenarioError("beta0 file '" + p.string() + "' is too short");
  }

  bp.config.grid = sc.grid;
  bp.config.tol_outer = sc.tol_outer;
  bp.config.tol_inner = sc.tol_inner;
  bp.config.max_outer = sc.max_outer;
  bp.config.max_inner = sc.max_inner;
  bp.config.inner_method = sc.inner_method;
  bp.config.clip_beta_box = sc.clip_beta_box;
  return bp;
}

SweepAxis parse_axis(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos) throw ScenarioError("axis spec needs 'key=v1,v2,...'");
  SweepAxis axis;
  axis.key = trim(spec.substr(0, eq));
  static const char* allowed[] = {"material.mu_star", "friction.c2g", "adhesion.lambda",
                                  "adhesion.beta0", "grid.T"};
  if (std::find(std::begin(allowed), std::end(allowed), axis.key) == std::end(allowed))
    throw ScenarioError("axis key '" + axis.key + "' is not sweepable");
  std::string rest = spec.substr(eq + 1);
  std::istringstream ss(rest);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) axis.values.push_back(std::stod(tok));
  }
  if (axis.values.empty()) throw ScenarioError("axis '" + axis.key + "' has no values");
  return axis;
}

}  // namespace antiplane
